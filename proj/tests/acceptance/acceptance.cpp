// One line per acceptance criterion; exit status 1 if any criterion fails.

#include "hjdirac/cli/cli.hpp"
#include "hjdirac/dirac_ops.hpp"
#include "hjdirac/dynamics.hpp"
#include "hjdirac/error.hpp"
#include "hjdirac/stat_mech.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <unistd.h>

using namespace hjdirac;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const Box kRegion{Point(1.0, 0.5, -0.5, -0.5), Point(2.0, 1.5, 0.5, 0.5)};

Point random_base(Rng& rng) {
  return Point(-3.0 - rng.uniform(), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
}

FourVector random_timelike(Rng& rng) {
  const Eigen::Vector3d q(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  return FourVector(q.norm() + rng.uniform(0.1, 2.0), q[0], q[1], q[2]);
}

Outcome check_clifford() {
  Outcome o;
  const GammaRep rep = build_gamma_rep();
  double anti = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      anti = std::max(anti, max_abs(anticommutator(rep[a], rep[b]) - 2.0 * (a == b ? eta(a) : 0) * CMat4::Identity()));
  Rng rng(kSeed, 1);
  double square = 0.0, spectrum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const FourVector v(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    const CMat4 s = slash(rep, v).matrix;
    square = std::max(square, max_abs(s * s - norm2(v) * CMat4::Identity()));
  }
  for (int i = 0; i < 1000; ++i) {
    const FourVector v = random_timelike(rng);
    const Eigensystem es = slash_eigensystem(rep, v);
    const double root = std::sqrt(norm2(v));
    if (es.pairs.size() != 4) spectrum = INFINITY;
    for (std::size_t k = 0; k < es.pairs.size(); ++k)
      spectrum = std::max(spectrum, std::abs(es.pairs[k].value - (k < 2 ? root : -root)));
  }
  o.require(anti <= 1e-12, "anticommutator " + num(anti));
  o.require(square <= 1e-12, "square " + num(square));
  o.require(spectrum <= 1e-10, "spectrum " + num(spectrum));
  o.detail = o.pass ? "anticommutator " + num(anti) + ", square " + num(square) + ", spectrum " + num(spectrum)
                    : o.detail;
  return o;
}

Outcome check_hamilton_jacobi() {
  Outcome o;
  Rng rng(kSeed, 2);
  const ProjectileField proj(1.0, 1.0, 2.0, 1.0);
  const Box box{Point(0, 0, 0, -1), Point(2, 2, 2, 1)};
  double worst_loop = 0.0, shell = 0.0;
  bool exact = true;
  for (double s : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const HJReport r = is_exact(proj.at(s), box, rng);
    exact = exact && r.pass;
    worst_loop = std::max(worst_loop, r.max_loop_ratio);
    shell = std::max(shell, mass_shell_check(proj.at(s), {proj.position(s)}));
  }
  o.require(exact && worst_loop < 1e-8, "projectile loop ratio " + num(worst_loop));
  o.require(shell < 1e-8, "mass shell " + num(shell));

  const CovectorField curl = [](const Point& x) { return Covector(0.0, -x[2], x[1], 0.0); };
  ExactnessOptions opt;
  opt.n_loops = 12;
  const HJReport c = is_exact_form(curl, box, rng, opt);
  double green = 0.0;
  for (const auto& l : c.loops) {
    const double predicted = (l.axis_a == 1 && l.axis_b == 2) ? 2.0 * l.area() : 0.0;
    green = std::max(green, std::abs(l.integral - predicted) / (2.0 * l.area()));
  }
  o.require(!c.pass, "curl field passed");
  o.require(green <= 0.01, "Green deviation " + num(green));
  if (o.pass) o.detail = "loop ratio " + num(worst_loop) + ", shell " + num(shell) + ", Green deviation " + num(green);
  return o;
}

Outcome check_lemmas() {
  Outcome o;
  const GammaRep rep = build_gamma_rep();
  Rng rng(kSeed, 3);
  int scaled_ok = 0;
  for (int i = 0; i < 20; ++i) {
    const HamiltonJacobiField w = construct_geodesic_W(1.0, random_base(rng));
    const double a = rng.uniform(0.5, 2.0), b = rng.uniform(-0.4, 0.4) * a, c = rng.uniform(0.2, 1.0);
    const ScaleFunction psi{"a w + b tanh(c w)", [=](double x) { return a * x + b * std::tanh(c * x); },
                            [=](double x) {
                              const double t = std::tanh(c * x);
                              return a + b * c * (1 - t * t);
                            }};
    const ScaleReport r = scale_check(w, psi, kRegion, rng);
    const bool plain = is_exact(w, kRegion, rng).pass;
    if (r.monotone && r.pass == plain && plain) ++scaled_ok;
  }
  o.require(scaled_ok == 20, std::to_string(scaled_ok) + "/20 scalings");

  double common = 0.0;
  int refused = 0;
  for (int i = 0; i < 100; ++i) {
    const FourVector w = random_timelike(rng);
    const SpinorState st = simultaneous_eigenvector(rep, rng.uniform(0.2, 3.0) * w, w);
    common = std::max({common, st.residual_v, st.residual_w});
    try {
      simultaneous_eigenvector(rep, random_timelike(rng), w);
    } catch (const Error& e) {
      refused += e.kind() == ErrorKind::NotCommuting;
    }
  }
  o.require(common < 1e-10, "eigenvector residual " + num(common));
  o.require(refused == 100, std::to_string(refused) + "/100 non-parallel refused");

  const Point base = random_base(rng);
  const Covector c(0.2, -0.3, 0.1, 0.4);
  const HamiltonJacobiField geo = construct_geodesic_W(1.0, base);
  HamiltonJacobiField spun = geo;
  spun.value = [geo, c](const Point& x) { return geo(x) + c.vec().dot(x); };
  spun.analytic_gradient = [geo, c](const Point& x) { return gradient(geo, x) + c; };
  const Congruence cong = Congruence::radial(base, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(uniform_point(rng, kRegion));
  const PerpDecomposition d = decompose_parallel_perp(spun, cong.tangent, pts);
  double comm = 0.0;
  for (const auto& x : pts)
    comm = std::max(comm, frobenius_norm(commutator(slash(rep, gradient(d.w_par, x)), slash(rep, cong.tangent(x)).matrix)));
  o.require(comm < 1e-10, "spin commutator " + num(comm));
  if (o.pass) o.detail = "20/20 scalings, eigen residual " + num(common) + ", 100/100 refused, spin commutator " + num(comm);
  return o;
}

Outcome check_dirac() {
  Outcome o;
  const GammaRep rep = build_gamma_rep();
  Rng rng(kSeed, 4);
  double plus = 0.0, minus = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double m0 = rng.uniform(0.5, 2.0);
    const Eigen::Vector3d q(rng.normal(), rng.normal(), rng.normal());
    const FourVector p(std::sqrt(m0 * m0 + q.squaredNorm()), q[0], q[1], q[2]);
    const Eigensystem es = slash_eigensystem(rep, p);
    for (std::size_t k = 0; k < 4; ++k) {
      const DiracResidual r = conventional_dirac_residual(rep, Complex(0, 1), m0, p, es.pairs[k].vector);
      if (k < 2)
        plus = std::max({plus, r.gamma_form, r.alpha_form});
      else
        minus = std::max({minus, std::abs(r.gamma_form - 2 * m0), std::abs(r.alpha_form - 2 * m0)});
    }
  }
  o.require(plus < 1e-10, "+ residual " + num(plus));
  o.require(minus < 1e-10, "- residual deviation from 2 m0 " + num(minus));
  if (o.pass) o.detail = "+ residual " + num(plus) + ", |- residual - 2 m0| " + num(minus);
  return o;
}

Outcome check_lie_transport() {
  Outcome o;
  const GammaRep rep = build_gamma_rep();
  Rng rng(kSeed, 5);
  int pass = 0, fail = 0, mixed = 0;
  double lie = 0.0;
  for (int n = 0; n < 10; ++n) {
    const Point b = random_base(rng);
    Congruence c = Congruence::radial(b, 1.0);
    if (n % 2) {
      c = Congruence::from_initial_surface(
          0.0, [b](const Eigen::Vector3d& y) { return Eigen::Vector3d((y - b.tail<3>()) / (-b[0])); }, 1.0);
    }
    const HamiltonJacobiField w = construct_geodesic_W(1.0, b);
    const LieTransportReport g = lie_transport_check(rep, c, w, WaveFunction::identity(), kRegion, rng);
    const LieTransportReport s = lie_transport_check(rep, c.with_shear(0.1), w, WaveFunction::identity(), kRegion, rng);
    lie = std::max(lie, g.lie_residual);
    pass += g.verdict == Verdict::BothPass;
    fail += s.verdict == Verdict::BothFail;
    mixed += (g.verdict == Verdict::Mixed) + (s.verdict == Verdict::Mixed);
  }
  o.require(lie < 1e-6, "max |L_u p| " + num(lie));
  o.require(pass == 10, std::to_string(pass) + "/10 geodesic both-pass");
  o.require(fail == 10, std::to_string(fail) + "/10 shear both-fail");
  o.require(mixed == 0, std::to_string(mixed) + " mixed");
  if (o.pass) o.detail = "max |L_u p| " + num(lie) + ", 10/10 both-pass, 10/10 both-fail, 0 mixed";
  return o;
}

double projectile_error(double step) {
  const HamiltonianModel m = HamiltonianModel::projectile(1.0, 1.0);
  const PhaseState start = projectile_launch(m, 1.0, 2.0);
  double worst = 0.0;
  for (const auto& st : integrate(m, start, 2.0, step).samples)
    worst = std::max(worst, (st.x.vec() - projectile_exact(1.0, 1.0, start, st.s).x.vec()).cwiseAbs().maxCoeff());
  return worst;
}

Outcome check_dynamics() {
  Outcome o;
  const HamiltonianModel arc = HamiltonianModel::projectile_arclength(1.0, 1.0);
  double dy = 0.0;
  for (const auto& st : integrate(arc, projectile_launch(arc, 1.0, 2.0), 2.0, 1e-3).samples)
    dy = std::max(dy, std::abs(st.x[2] - (2.0 * st.s - 0.5 * st.s * st.s)));
  o.require(dy < 1e-9, "max |dy| " + num(dy));

  const double ratio = projectile_error(0.1) / projectile_error(0.05);
  o.require(ratio >= 12 && ratio <= 20, "step-halving ratio " + num(ratio));

  const CoordinateChart chart = CoordinateChart::polar();
  const PhaseState s0{FourVector(0, 1, 0, 0), FourVector(std::sqrt(1.25), 0, 0.5, 0), 0.0};
  const CovariantTrajectory ct = covariant_integrate(MetricField::polar(), chart, {}, s0, 1.0, 1e-3);
  const Eigen::Vector4d v = chart.jacobian(s0.x.vec()) * s0.p.vec();
  double line = 0.0;
  for (std::size_t k = 0; k < ct.cartesian.size(); ++k)
    line = std::max(line, (ct.cartesian[k] - (Point(0, 1, 0, 0) + ct.chart.samples[k].s * v)).cwiseAbs().maxCoeff());
  o.require(line < 1e-6, "polar line deviation " + num(line));

  const Trajectory h = integrate(HamiltonianModel::harmonic(), {FourVector(0, 1, 0, 0), FourVector(), 0.0}, 10.0, 1e-3);
  o.require(h.size() == 10001 && h.energy_drift < 1e-8, "H drift " + num(h.energy_drift));
  if (o.pass)
    o.detail = "max |dy| " + num(dy) + ", ratio " + num(ratio) + ", line " + num(line) + ", H drift " + num(h.energy_drift);
  return o;
}

Outcome check_commutator() {
  Outcome o;
  const GammaRep rep = build_gamma_rep();
  double zero = 0.0;
  Rng rng(kSeed, 7);
  for (int i = 0; i < 10; ++i) {
    const FourVector p = random_timelike(rng);
    for (double c : integrate(HamiltonianModel::free(1.0), {FourVector(), p, 0.0}, 1.0, 1e-2).comm_norm)
      zero = std::max(zero, c);
    for (double c : integrate(HamiltonianModel::dilation(rng.uniform(-1, 1)), {FourVector(), p, 0.0}, 1.0, 1e-2).comm_norm)
      zero = std::max(zero, c);
  }
  const HamiltonianModel proj = HamiltonianModel::projectile(1.0, 1.0);
  const Trajectory t = integrate(proj, projectile_launch(proj, 1.0, 2.0), 2.0, 1e-3);
  double smallest = INFINITY;
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t.samples[k].s > 0.1) smallest = std::min(smallest, normalized_commutator(rep, t.samples[k].p, t.pdot[k]));
  o.require(zero < 1e-12, "geodesic commutator " + num(zero));
  o.require(smallest > 1e-3, "projectile normalized commutator " + num(smallest));
  if (o.pass) o.detail = "geodesic/dilation max " + num(zero) + ", projectile min normalized " + num(smallest);
  return o;
}

Outcome check_statistics() {
  Outcome o;
  EnsembleConfig c;
  c.n = 1000000;
  c.T = 2.0;
  c.seed = kSeed;
  const MomentReport m = moments(sample_mb(c), c.axis_variance());
  double z = 0.0;
  for (const auto& a : m.axes) z = std::max(z, std::abs(a.variance - c.axis_variance()) / a.se_variance);
  o.require(z <= 3.0, "variance z " + num(z));

  std::array<double, 3> var{};
  for (std::size_t k = 0; k < 3; ++k) {
    EnsembleConfig e = c;
    e.n = 300000;
    e.T = std::array<double, 3>{1, 2, 4}[k];
    e.seed = kSeed + 1 + k;
    const MomentReport r = moments(sample_mb(e), e.axis_variance());
    var[k] = (r.axes[0].variance + r.axes[1].variance + r.axes[2].variance) / 3;
  }
  const double ratio_err = std::max(std::abs(var[1] / var[0] / 2 - 1), std::abs(var[2] / var[0] / 4 - 1));
  o.require(ratio_err <= 0.02, "T ratio error " + num(ratio_err));

  auto binom = [](int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  double comb = 0.0;
  for (int L = 1; L <= 6; ++L) {
    std::vector<double> levels;
    for (int l = 0; l < L; ++l) levels.push_back(0.5 * l);
    double z1 = 0;
    for (double e : levels) z1 += std::exp(-e);
    for (int n = 0; n <= 6; ++n) {
      comb = std::max(comb, std::abs(partition_enumerate(levels, n, 1.0, Statistics::BoseEinstein).states.size() -
                                     binom(n + L - 1, n)));
      comb = std::max(comb, std::abs(partition_enumerate(levels, n, 1.0, Statistics::FermiDirac).states.size() -
                                     binom(L, n)));
      comb = std::max(comb, std::abs(partition_enumerate(levels, n, 1.0, Statistics::Distinguishable).Z -
                                     std::pow(z1, n)) / std::pow(z1, n));
    }
  }
  o.require(comb <= 1e-12, "enumeration " + num(comb));

  Rng rng(kSeed, 8);
  const double theta = 2.5;
  std::vector<double> times{0.0};
  for (int i = 0; i < 100000; ++i) times.push_back(times.back() + rng.exponential(theta));
  const double se = std::abs(exp_arrival_estimator(times) - theta) / (theta / std::sqrt(1e5));
  o.require(se <= 3.0, "arrival z " + num(se));
  if (o.pass)
    o.detail = "variance z " + num(z) + ", T ratio error " + num(ratio_err) + ", enumeration " + num(comb) +
               ", arrival z " + num(se);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome check_reproducibility() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("hjdirac_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream(root / "cfg.json") << R"({"seed": 99, "verify": {"ensemble_n": 100000},
      "simulate": {"model": "projectile-relativistic"}, "ensemble": {"n": 50000, "statistics": "BE", "levels": [0, 0.5, 1]}})";
  }
  const std::string cfg = (root / "cfg.json").string();
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> runs{
      {{"verify", "--suite", "dynamics"}, {"verify_report.json"}},
      {{"verify", "--suite", "statmech"}, {"verify_report.json"}},
      {{"simulate"}, {"trajectory.csv", "simulate.json"}},
      {{"simulate", "--format", "json"}, {"trajectory.json", "simulate.json"}},
      {{"ensemble"}, {"samples.csv", "histogram.csv", "occupancy.csv", "moments.json"}},
  };
  int compared = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::array<fs::path, 2> dirs{root / ("r" + std::to_string(i) + "a"), root / ("r" + std::to_string(i) + "b")};
    for (const auto& d : dirs) {
      std::vector<std::string> args = runs[i].first;
      args.insert(args.end(), {"--config", cfg, "--out", d.string()});
      std::ostringstream out, err;
      const int code = cli::run(args, out, err);
      o.require(code == 0, args[0] + " exited " + std::to_string(code));
    }
    for (const auto& f : runs[i].second) {
      const std::string a = slurp(dirs[0] / f), b = slurp(dirs[1] / f);
      o.require(!a.empty() && a == b, f + " differs between reruns");
      ++compared;
    }
  }
  fs::remove_all(root);
  if (o.pass) o.detail = std::to_string(compared) + " files byte-identical across reruns";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // 0: no runtime limit
  };
  const std::vector<Criterion> criteria{
      {1, "Clifford identities", check_clifford, 1.0},
      {2, "exactness and mass shell", check_hamilton_jacobi, 5.0},
      {3, "scaling, simultaneous eigenvectors, spin constants", check_lemmas, 0.0},
      {4, "plane-wave Dirac residual", check_dirac, 0.0},
      {5, "Lie transport verdicts", check_lie_transport, 0.0},
      {6, "integrator accuracy and charts", check_dynamics, 10.0},
      {7, "commutator criterion", check_commutator, 0.0},
      {8, "statistical suite", check_statistics, 30.0},
      {9, "reproducibility", check_reproducibility, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; runtime " + num(secs) + " s over " + num(c.budget_s) + " s";
    }
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
  }
  std::fflush(stdout);
  return failed ? 1 : 0;
}
