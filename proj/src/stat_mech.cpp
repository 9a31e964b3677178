#include "hjdirac/stat_mech.hpp"

#include "hjdirac/error.hpp"
#include "hjdirac/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace hjdirac {
namespace {

double psi_of(double k, const FourVector& p) { return std::exp(0.5 * k * norm2(p)); }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HJDIRAC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) hw = static_cast<std::size_t>(v);
  }
  return hw;
}

EigenSolutionReport eigen_solution_check(double k, const Trajectory& trajectory) {
  const auto& samples = trajectory.samples;
  if (samples.size() < 3 || trajectory.pdot.size() != samples.size()) {
    throw Error(ErrorKind::InvalidArgument, "eigen-solution check needs at least three samples with pdot");
  }
  EigenSolutionReport out;
  const double psi0 = psi_of(k, samples.front().p);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const FourVector& p = samples[i].p;
    const double psi = psi_of(k, p);
    out.psi_variation = std::max(out.psi_variation, std::abs(psi - psi0) / std::abs(psi0));

    // psi as a function of H = p.p / 2
    const double h_value = 0.5 * norm2(p);
    const double dh = 1e-6 * std::max(1.0, std::abs(h_value));
    const double d_psi_dh = (std::exp(k * (h_value + dh)) - std::exp(k * (h_value - dh))) / (2.0 * dh);
    out.psi_prime_residual = std::max(out.psi_prime_residual, std::abs(d_psi_dh - k * psi) / std::abs(psi));

    if (i == 0 || i + 1 == samples.size()) continue;
    const double h1 = samples[i].s - samples[i - 1].s;
    const double h2 = samples[i + 1].s - samples[i].s;
    const double fd = (-h2 / (h1 * (h1 + h2))) * psi_of(k, samples[i - 1].p) +
                      ((h2 - h1) / (h1 * h2)) * psi +
                      (h1 / (h2 * (h1 + h2))) * psi_of(k, samples[i + 1].p);
    const double chain = k * psi * dot(trajectory.pdot[i], p);
    const double scale = std::max(1.0, std::abs(psi));
    out.chain_residual = std::max(out.chain_residual, std::abs(fd - chain) / scale);
    out.flipped_residual = std::max(out.flipped_residual, std::abs(fd + chain) / scale);
    ++out.interior_samples;
  }
  return out;
}

void EnsembleConfig::validate() const {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "ensemble needs n >= 1");
  if (!(m0 > 0.0) || !std::isfinite(m0)) throw Error(ErrorKind::InvalidArgument, "ensemble needs m0 > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidArgument, "ensemble needs T > 0");
  if (!(kB > 0.0) || !std::isfinite(kB)) throw Error(ErrorKind::InvalidArgument, "ensemble needs kB > 0");
}

double mb_density(const EnsembleConfig& config, const Eigen::Vector3d& v) {
  return std::exp(-0.5 * config.m0 * v.squaredNorm() / (config.kB * config.T));
}

double mb_probability_density(const EnsembleConfig& config, const Eigen::Vector3d& v) {
  const double var = config.axis_variance();
  return std::pow(2.0 * std::numbers::pi * var, -1.5) * std::exp(-0.5 * v.squaredNorm() / var);
}

VelocitySample sample_mb(const EnsembleConfig& config, std::size_t workers) {
  config.validate();
  const double sigma = std::sqrt(config.axis_variance());
  VelocitySample out;
  out.v.resize(config.n);
  out.eps.resize(config.n);
  const std::size_t chunks = (config.n + kSampleChunk - 1) / kSampleChunk;
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t c = next++; c < chunks; c = next++) {
      Rng rng(config.seed, c);
      const std::size_t end = std::min(config.n, (c + 1) * kSampleChunk);
      for (std::size_t i = c * kSampleChunk; i < end; ++i) {
        Eigen::Vector3d v;
        for (int a = 0; a < 3; ++a) v[a] = sigma * rng.normal();
        out.v[i] = v;
        out.eps[i] = 0.5 * config.m0 * v.squaredNorm();
      }
    }
  };
  const std::size_t count = std::min(chunks, workers == 0 ? worker_count() : workers);
  if (count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

double MomentReport::max_z() const {
  const double nn = static_cast<double>(n);
  const double se_mean_expected = std::sqrt(expected_variance / nn);
  const double se_var_expected = expected_variance * std::sqrt(2.0 / (nn - 1.0));
  const double se_kurt_expected = std::sqrt(24.0 / nn);
  double z = 0.0;
  for (const auto& a : axes) {
    z = std::max(z, std::abs(a.mean) / se_mean_expected);
    z = std::max(z, std::abs(a.variance - expected_variance) / se_var_expected);
    z = std::max(z, std::abs(a.excess_kurtosis) / se_kurt_expected);
  }
  return z;
}

MomentReport moments(const VelocitySample& sample, double expected_variance) {
  const std::size_t n = sample.v.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "moments need at least two samples");
  MomentReport out;
  out.n = n;
  out.expected_variance = expected_variance;
  const double nn = static_cast<double>(n);
  for (int a = 0; a < 3; ++a) {
    double mean = 0.0;
    for (const auto& v : sample.v) mean += v[a];
    mean /= nn;
    double m2 = 0.0, m4 = 0.0;
    for (const auto& v : sample.v) {
      const double d2 = (v[a] - mean) * (v[a] - mean);
      m2 += d2;
      m4 += d2 * d2;
    }
    m2 /= nn;
    m4 /= nn;
    AxisMoments& ax = out.axes[static_cast<std::size_t>(a)];
    ax.mean = mean;
    ax.variance = m2;
    ax.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    ax.se_mean = std::sqrt(m2 / nn);
    ax.se_variance = m2 * std::sqrt(2.0 / (nn - 1.0));
    ax.se_kurtosis = std::sqrt(24.0 / nn);
  }
  return out;
}

double trapezoid3(const std::function<double(const Eigen::Vector3d&)>& f, const Grid3& grid) {
  if (grid.n < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one interval");
  const Eigen::Vector3d h = (grid.hi - grid.lo) / grid.n;
  double sum = 0.0;
  for (int i = 0; i <= grid.n; ++i) {
    const double wi = (i == 0 || i == grid.n) ? 0.5 : 1.0;
    for (int j = 0; j <= grid.n; ++j) {
      const double wj = (j == 0 || j == grid.n) ? 0.5 : 1.0;
      for (int l = 0; l <= grid.n; ++l) {
        const double wl = (l == 0 || l == grid.n) ? 0.5 : 1.0;
        const Eigen::Vector3d x = grid.lo + Eigen::Vector3d(i * h[0], j * h[1], l * h[2]);
        sum += wi * wj * wl * f(x);
      }
    }
  }
  return sum * h.prod();
}

SliceNormalization slice_normalize(
    const std::function<double(const Eigen::Vector3d&, double)>& psi_squared, double t,
    const Grid3& grid) {
  auto f = [&psi_squared, t](const Eigen::Vector3d& x) { return psi_squared(x, t); };
  SliceNormalization out;
  out.constant = trapezoid3(f, grid);

  const Eigen::Vector3d h = (grid.hi - grid.lo) / grid.n;
  double boundary = 0.0;
  for (int i = 0; i <= grid.n; ++i) {
    for (int j = 0; j <= grid.n; ++j) {
      for (int l = 0; l <= grid.n; ++l) {
        const bool on_face = i == 0 || i == grid.n || j == 0 || j == grid.n || l == 0 || l == grid.n;
        if (!on_face) continue;
        const Eigen::Vector3d x = grid.lo + Eigen::Vector3d(i * h[0], j * h[1], l * h[2]);
        boundary = std::max(boundary, std::abs(f(x)));
      }
    }
  }
  const double volume = (grid.hi - grid.lo).prod();
  out.boundary_fraction = out.constant > 0.0 ? boundary * volume / out.constant
                                             : std::numeric_limits<double>::infinity();
  if (!(out.boundary_fraction < 1e-6)) {
    throw Error(ErrorKind::NotIntegrable, "slice does not decay at the grid boundary (fraction " +
                                              std::to_string(out.boundary_fraction) + ")");
  }
  const double c = out.constant;
  out.density = [psi_squared, t, c](const Eigen::Vector3d& x) { return psi_squared(x, t) / c; };
  return out;
}

const char* to_string(Statistics s) {
  switch (s) {
    case Statistics::BoseEinstein: return "BE";
    case Statistics::FermiDirac: return "FD";
    case Statistics::Distinguishable: return "MB";
  }
  return "unknown";
}

PartitionTable partition_enumerate(const std::vector<double>& levels, int n, double beta,
                                   Statistics statistics) {
  if (levels.empty()) throw Error(ErrorKind::InvalidArgument, "no energy levels");
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "particle count must be non-negative");
  if (levels.size() > 12 || n > 12) {
    throw Error(ErrorKind::TooLarge, "enumeration is bounded by 12 levels and 12 particles");
  }
  const int cap = statistics == Statistics::FermiDirac ? 1 : n;
  const std::size_t L = levels.size();
  PartitionTable table;
  std::vector<int> occ(L, 0);

  auto emit = [&]() {
    OccupancyState st;
    st.occupation = occ;
    double multiplicity = 1.0;
    if (statistics == Statistics::Distinguishable) {
      multiplicity = factorial(n);
      for (int k : occ) multiplicity /= factorial(k);
    }
    for (std::size_t l = 0; l < L; ++l) st.energy += occ[l] * levels[l];
    st.weight = multiplicity * std::exp(-beta * st.energy);
    table.Z += st.weight;
    table.states.push_back(std::move(st));
  };
  std::function<void(std::size_t, int)> fill = [&](std::size_t level, int remaining) {
    if (level + 1 == L) {
      if (remaining <= cap) {
        occ[level] = remaining;
        emit();
      }
      return;
    }
    for (int k = std::min(cap, remaining); k >= 0; --k) {
      occ[level] = k;
      fill(level + 1, remaining - k);
    }
    occ[level] = 0;
  };
  fill(0, n);
  for (auto& st : table.states) st.probability = st.weight / table.Z;
  return table;
}

double exp_arrival_estimator(const std::vector<double>& times) {
  if (times.size() < 2) throw Error(ErrorKind::DegenerateData, "need at least one arrival gap");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorKind::DegenerateData, "arrival times must be strictly increasing");
    }
  }
  return static_cast<double>(times.size() - 1) / (times.back() - times.front());
}

}  // namespace hjdirac
