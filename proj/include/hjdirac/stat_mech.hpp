#pragma once

#include "hjdirac/dynamics.hpp"
#include "hjdirac/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace hjdirac {

// Worker count for parallel sampling: HJDIRAC_THREADS if set and positive,
// else the hardware concurrency (at least 1).
std::size_t worker_count();

struct EigenSolutionReport {
  double psi_prime_residual = 0.0;  // |dpsi/dH - k psi| / |psi| by differences in H
  double chain_residual = 0.0;      // max |dpsi/ds (differences) - k psi (pdot.p)| / max(1, |psi|)
  double flipped_residual = 0.0;    // same with the opposite sign on the right-hand side
  double psi_variation = 0.0;       // max |psi(s) - psi(s0)| / |psi(s0)|
  std::size_t interior_samples = 0;
};

// psi = exp((k/2) p.p) along the trajectory; the chain rule gives
// dpsi/ds = k psi (pdot . p). Needs at least three samples.
EigenSolutionReport eigen_solution_check(double k, const Trajectory& trajectory);

struct EnsembleConfig {
  std::size_t n = 100000;
  double m0 = 1.0;
  double T = 1.0;
  double kB = 1.0;
  std::uint64_t seed = 1;

  double k() const { return 1.0 / (kB * T); }
  // Per-axis variance of |psi|^2.
  double axis_variance() const { return kB * T / (2.0 * m0); }
  void validate() const;  // throws InvalidArgument
};

// exp(-(m0/2)|v|^2 / (kB T)), unnormalized, equal to 1 at v = 0.
double mb_density(const EnsembleConfig& config, const Eigen::Vector3d& v);
// Normalized |psi|^2: Gaussian with per-axis variance kB T / (2 m0).
double mb_probability_density(const EnsembleConfig& config, const Eigen::Vector3d& v);

struct VelocitySample {
  std::vector<Eigen::Vector3d> v;
  std::vector<double> eps;  // m0 |v|^2 / 2
};

// Chunks of kSampleChunk particles, chunk c drawn from Rng(seed, c), so the
// output does not depend on the worker count.
inline constexpr std::size_t kSampleChunk = 65536;
VelocitySample sample_mb(const EnsembleConfig& config, std::size_t workers = 0);

struct AxisMoments {
  double mean = 0.0;
  double variance = 0.0;  // sum (u - mean)^2 / n
  double excess_kurtosis = 0.0;
  double se_mean = 0.0;      // sigma / sqrt(n)
  double se_variance = 0.0;  // sigma^2 sqrt(2 / (n - 1))
  double se_kurtosis = 0.0;  // sqrt(24 / n)
};

struct MomentReport {
  std::array<AxisMoments, 3> axes;
  double expected_variance = 0.0;
  std::size_t n = 0;

  // Largest deviation of mean, variance and kurtosis in units of the
  // standard errors predicted by the target Gaussian.
  double max_z() const;
  bool within(double n_se) const { return max_z() <= n_se; }
};

MomentReport moments(const VelocitySample& sample, double expected_variance);

struct Grid3 {
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(-1.0);
  Eigen::Vector3d hi = Eigen::Vector3d::Constant(1.0);
  int n = 64;  // intervals per axis
};

struct SliceNormalization {
  double constant = 0.0;           // integral of psi^2 over the slice
  double boundary_fraction = 0.0;  // max boundary value * volume / constant
  std::function<double(const Eigen::Vector3d&)> density;
};

// Composite trapezoid over the grid box. Throws NotIntegrable when the
// boundary fraction reaches 1e-6.
SliceNormalization slice_normalize(
    const std::function<double(const Eigen::Vector3d&, double)>& psi_squared, double t,
    const Grid3& grid);
double trapezoid3(const std::function<double(const Eigen::Vector3d&)>& f, const Grid3& grid);

enum class Statistics { BoseEinstein, FermiDirac, Distinguishable };
const char* to_string(Statistics s);

struct OccupancyState {
  std::vector<int> occupation;
  double energy = 0.0;
  double weight = 0.0;  // multiplicity * exp(-beta energy)
  double probability = 0.0;
};

struct PartitionTable {
  std::vector<OccupancyState> states;
  double Z = 0.0;
};

// All occupation vectors with sum n, first level varying slowest from n down.
// Throws TooLarge when levels or n exceed 12.
PartitionTable partition_enumerate(const std::vector<double>& levels, int n, double beta,
                                   Statistics statistics);

// n / (t_n - t_0) for strictly increasing times; throws DegenerateData.
double exp_arrival_estimator(const std::vector<double>& times);

}  // namespace hjdirac
