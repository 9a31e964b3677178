#include "hjdirac/cli/cli.hpp"

#include "hjdirac/dirac_ops.hpp"
#include "hjdirac/dynamics.hpp"
#include "hjdirac/error.hpp"
#include "hjdirac/loaders.hpp"
#include "hjdirac/report_json.hpp"
#include "hjdirac/stat_mech.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace hjdirac::cli {
namespace {

using nlohmann::json;

struct Check {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  json tolerance;
  bool pass = false;
  json detail;
};

struct Suite {
  std::string name;
  std::vector<Check> checks;

  // pass iff residual <= tol (NaN fails)
  void le(std::string check, std::string anchor, double residual, double tol, json detail = nullptr) {
    checks.push_back({std::move(check), std::move(anchor), residual, tol, residual <= tol, std::move(detail)});
  }
  void flag(std::string check, std::string anchor, double residual, json tol, bool pass, json detail = nullptr) {
    checks.push_back({std::move(check), std::move(anchor), residual, std::move(tol), pass, std::move(detail)});
  }
  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
  json to_json() const {
    json arr = json::array();
    for (const auto& c : checks) {
      json j = {{"name", c.name},
                {"anchor", c.anchor},
                {"residual", std::isfinite(c.residual) ? json(c.residual) : json(nullptr)},
                {"tolerance", c.tolerance},
                {"pass", c.pass}};
      if (!c.detail.is_null()) j["detail"] = c.detail;
      arr.push_back(j);
    }
    return {{"checks", arr}, {"pass", pass()}};
  }
};

FourVector random_timelike(Rng& rng, double max_speed = 0.9) {
  Eigen::Vector3d dir(rng.normal(), rng.normal(), rng.normal());
  dir.normalize();
  const double speed = max_speed * rng.uniform();
  const double scale = rng.uniform(0.5, 2.0);
  const double gamma = 1.0 / std::sqrt(1.0 - speed * speed);
  return FourVector(scale * gamma, scale * gamma * speed * dir[0], scale * gamma * speed * dir[1],
                    scale * gamma * speed * dir[2]);
}

// Region and base events used for geodesic families.
const Box kGeodesicRegion{Point(1.0, 0.5, -0.5, -0.5), Point(2.0, 1.5, 0.5, 0.5)};

Point random_base(Rng& rng) {
  return Point(-3.0 - rng.uniform(), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
}

Suite clifford_suite(const RunConfig& cfg) {
  Suite s{"clifford", {}};
  const GammaRep rep = build_gamma_rep();
  Rng rng(cfg.seed, 1);

  double worst = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double target = a == b ? 2.0 * eta(a) : 0.0;
      worst = std::max(worst, max_abs(anticommutator(rep[a], rep[b]) - target * CMat4::Identity()));
    }
  }
  s.le("anticommutators", "{gamma^a, gamma^b} = 2 eta^{ab} I, all 16 pairs", worst,
       cfg.tol["clifford.anticommutator"]);

  worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const FourVector v(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const CMat4 m = slash(rep, v).matrix;
    worst = std::max(worst, max_abs(m * m - norm2(v) * CMat4::Identity()));
  }
  s.le("slash_square", "slash(v)^2 = (v.v) I on 1000 random v", worst, cfg.tol["clifford.square"]);

  worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const FourVector v = random_timelike(rng);
    const Eigensystem es = slash_eigensystem(rep, v);
    const double root = std::sqrt(norm2(v));
    const CMat4 m = slash(rep, v).matrix;
    for (std::size_t k = 0; k < es.pairs.size(); ++k) {
      const double expected = k < 2 ? root : -root;
      worst = std::max(worst, std::abs(es.pairs[k].value - expected));
      worst = std::max(worst, (m * es.pairs[k].vector - es.pairs[k].value * es.pairs[k].vector).norm());
    }
    if (es.pairs.size() != 4) worst = std::numeric_limits<double>::infinity();
  }
  s.le("timelike_spectrum", "spectrum of slash(v) is {+-sqrt(v.v)} twice each", worst, cfg.tol["clifford.eigen"]);

  worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const FourVector u(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const FourVector w(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const ProductDecomposition d = product_decomposition(rep, u, w);
    const CMat4 prod = slash(rep, u).matrix * slash(rep, w).matrix;
    worst = std::max(worst, max_abs(prod - d.dot * CMat4::Identity() - d.wedge));
    worst = std::max(worst, std::abs(d.wedge.trace()));
  }
  s.le("product_split", "slash(u) slash(w) = (u.w) I + [slash u, slash w]/2, wedge traceless", worst,
       cfg.tol["clifford.reconstruction"]);

  bool raised = false;
  try {
    slash_eigensystem(rep, FourVector(1, 1, 0, 0));
  } catch (const Error& e) {
    raised = e.kind() == ErrorKind::NullVector;
  }
  s.flag("null_vector_rejected", "eigensystem of a null slashed vector is refused", raised ? 0.0 : 1.0,
         "NullVector", raised);
  return s;
}

Suite geometry_suite(const RunConfig& cfg) {
  Suite s{"geometry", {}};
  const GammaRep rep = build_gamma_rep();
  Rng rng(cfg.seed, 2);

  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Mat4 g = MinkowskiSignature::matrix();
    for (int a = 0; a < 4; ++a) {
      for (int b = a; b < 4; ++b) {
        const double e = rng.uniform(-0.1, 0.1);
        g(a, b) += e;
        if (a != b) g(b, a) += e;
      }
    }
    MetricField m;
    m.name = "perturbed";
    m.g = [g](const Point&) { return g; };
    worst = std::max(worst, tetrad_at(m, Point::Zero()).residual(g));
  }
  s.le("tetrad_orthonormal", "g_{mu nu} e_a^mu e_b^nu = eta_ab on 100 perturbed metrics", worst,
       cfg.tol["geometry.tetrad"]);

  const MetricField polar = MetricField::polar();
  MetricField polar_fd = polar;
  polar_fd.dg = nullptr;
  double closed = 0.0, fd_gap = 0.0, compat = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Point x(rng.uniform(-1, 1), rng.uniform(0.5, 3.0), rng.uniform(0, 6), rng.uniform(-1, 1));
    const ChristoffelField c = christoffel_at(polar, x);
    const ChristoffelField cf = christoffel_at(polar_fd, x);
    closed = std::max({closed, std::abs(c(1, 2, 2) + x[1]), std::abs(c(2, 1, 2) - 1.0 / x[1])});
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int d = 0; d < 4; ++d) fd_gap = std::max(fd_gap, std::abs(c(a, b, d) - cf(a, b, d)));
      }
    }
    compat = std::max(compat, metric_compatibility_residual(polar(x), metric_derivatives_fd(polar, x), cf));
  }
  s.le("christoffel_polar", "Gamma^r_{theta theta} = -r, Gamma^theta_{r theta} = 1/r", closed,
       cfg.tol["geometry.christoffel"]);
  s.le("christoffel_difference_partials", "difference partials agree with analytic partials", fd_gap,
       cfg.tol["geometry.christoffel"]);
  s.le("metric_compatibility", "nabla_lambda g_{mu nu} = 0", compat, cfg.tol["geometry.compatibility"]);

  worst = 0.0;
  const CoordinateChart pc = CoordinateChart::polar();
  const CoordinateChart tc = CoordinateChart::rescaled_time(2.0);
  for (int i = 0; i < 100; ++i) {
    const Point x(rng.uniform(-1, 1), rng.uniform(0.2, 3.0), rng.uniform(0, 6), rng.uniform(-1, 1));
    worst = std::max({worst, covariant_clifford_residual(pc, rep, x), covariant_clifford_residual(tc, rep, x)});
  }
  s.le("covariant_clifford", "{gamma~^mu, gamma~^nu} = 2 g^{mu nu} I in polar and rescaled charts", worst,
       cfg.tol["geometry.clifford"]);

  const Box box{Point(0.0, 0.5, 0.5, 0.5), Point(1.0, 1.5, 1.5, 1.5)};
  if (cfg.verify.metric) {
    const MetricField m = load_metric(*cfg.verify.metric);
    double tetrad = 0.0, comp = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Point x = uniform_point(rng, box);
      tetrad = std::max(tetrad, tetrad_at(m, x).residual(m(x)));
      const MetricDerivatives dg = metric_derivatives(m, x);
      comp = std::max(comp, metric_compatibility_residual(m(x), dg, christoffel_from(m(x), dg)));
    }
    s.le("config_metric_tetrad", "tetrad of the configured metric", tetrad, cfg.tol["geometry.tetrad"]);
    s.le("config_metric_compatibility", "nabla g = 0 for the configured metric", comp,
         cfg.tol["geometry.compatibility"]);
  }
  if (cfg.verify.chart) {
    const CoordinateChart c = load_chart(*cfg.verify.chart);
    double r = 0.0;
    for (int i = 0; i < 20; ++i) r = std::max(r, covariant_clifford_residual(c, rep, uniform_point(rng, box)));
    s.le("config_chart_clifford", "covariant Clifford relation in the configured chart", r,
         cfg.tol["geometry.clifford"]);
  }
  return s;
}

Suite hj_suite(const RunConfig& cfg) {
  Suite s{"hj", {}};
  Rng rng(cfg.seed, 3);
  ExactnessOptions opt;
  opt.n_loops = cfg.verify.loops;
  opt.segments = cfg.verify.segments;
  opt.closedness_tol = cfg.tol["hj.closed"];
  opt.loop_tol = cfg.tol["hj.loop"];

  const ProjectileField proj(1.0, 1.0, 2.0, 1.0);
  const Box pbox{Point(0.0, 0.0, 0.0, -1.0), Point(2.0, 2.0, 2.0, 1.0)};
  const HJReport pr = is_exact(proj.at(1.0), pbox, rng, opt);
  s.flag("projectile_exact", "dW = p.dx - H dt is exact (closedness and loop integrals)", pr.max_loop_ratio,
         {{"loop", opt.loop_tol}, {"closedness", opt.closedness_tol}}, pr.pass, to_json(pr));

  std::vector<Point> on_path;
  double shell = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double sv = 0.1 * i;
    shell = std::max(shell, mass_shell_check(proj.at(sv), {proj.position(sv)}));
  }
  s.le("projectile_mass_shell", "(dW/dt)^2 = m0^2 + p1^2 + p2^2 + p3^2 along the projectile", shell,
       cfg.tol["hj.shell"]);

  const Point base = random_base(rng);
  const HamiltonJacobiField geo = construct_geodesic_W(1.0, base);
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(uniform_point(rng, kGeodesicRegion));
  s.le("geodesic_mass_shell", "eta^{ab} dW_a dW_b = m0^2 for W = m0 s", mass_shell_check(geo, pts),
       cfg.tol["hj.shell"]);

  const CovectorField curl = [](const Point& x) { return Covector(0.0, -x[2], x[1], 0.0); };
  ExactnessOptions copt = opt;
  copt.n_loops = std::max(6, opt.n_loops);
  const HJReport cr = is_exact_form(curl, pbox, rng, copt);
  double green = 0.0;
  for (const auto& l : cr.loops) {
    const double predicted = (l.axis_a == 1 && l.axis_b == 2) ? 2.0 * l.area() : 0.0;
    green = std::max(green, std::abs(l.integral - predicted) / std::max(2.0 * l.area(), 1e-300));
  }
  s.flag("curl_counterexample", "p = (-y, x, 0), H = 0 is not exact; loop integral = 2 area", green,
         cfg.tol["hj.green"], !cr.pass && green <= cfg.tol["hj.green"], to_json(cr));

  bool scaling_ok = true;
  double worst_ratio = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double a = rng.uniform(0.5, 2.0), b = rng.uniform(-0.4, 0.4) * a, c = rng.uniform(0.2, 1.0);
    ScaleFunction psi{"a w + b tanh(c w)", [=](double w) { return a * w + b * std::tanh(c * w); },
                      [=](double w) { const double t = std::tanh(c * w); return a + b * c * (1.0 - t * t); }};
    ExactnessOptions sopt = opt;
    sopt.n_loops = 6;
    const ScaleReport r = scale_check(geo, psi, kGeodesicRegion, rng, sopt);
    scaling_ok = scaling_ok && r.pass && r.monotone;
    worst_ratio = std::max({worst_ratio, r.forward.max_loop_ratio, r.inverse ? r.inverse->max_loop_ratio : 0.0});
  }
  s.flag("scaling_preserves_exactness", "psi(W) exact iff W exact for 20 monotone psi", worst_ratio,
         opt.loop_tol, scaling_ok);

  HamiltonJacobiField shifted = geo;
  shifted.value = [geo](const Point& x) { return geo(x) + 0.5 * x[1]; };
  shifted.analytic_gradient = [geo](const Point& x) { return gradient(geo, x) + Covector(0, 0.5, 0, 0); };
  const Congruence cong = Congruence::radial(base, 1.0);
  const PerpDecomposition dec = decompose_parallel_perp(shifted, cong.tangent, pts);
  s.le("spin_constant_recovered", "W + 0.5 x^1 on its congruence gives c = (0, 0.5, 0, 0)",
       (dec.spin.vec() - Eigen::Vector4d(0, 0.5, 0, 0)).cwiseAbs().maxCoeff(), 1e-8);

  if (cfg.verify.field) {
    const HamiltonJacobiField f = load_field(*cfg.verify.field);
    const HJReport r = is_exact(f, kGeodesicRegion, rng, opt);
    s.flag("config_field_exact", "configured field is exact on the default region", r.max_loop_ratio,
           {{"loop", opt.loop_tol}, {"closedness", opt.closedness_tol}}, r.pass, to_json(r));
  }
  return s;
}

Suite dirac_suite(const RunConfig& cfg) {
  Suite s{"dirac", {}};
  const GammaRep rep = build_gamma_rep();
  Rng rng(cfg.seed, 4);
  const Complex i(0.0, 1.0);

  double plus = 0.0, minus = 0.0;
  for (int n = 0; n < 100; ++n) {
    const double m0 = rng.uniform(0.5, 2.0);
    const Eigen::Vector3d q(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const FourVector p(std::sqrt(m0 * m0 + q.squaredNorm()), q[0], q[1], q[2]);
    const Eigensystem es = slash_eigensystem(rep, p);
    for (std::size_t k = 0; k < 4; ++k) {
      const DiracResidual r = conventional_dirac_residual(rep, i, m0, p, es.pairs[k].vector);
      if (k < 2) {
        plus = std::max({plus, r.gamma_form, r.alpha_form});
      } else {
        minus = std::max({minus, std::abs(r.gamma_form - 2.0 * m0), std::abs(r.alpha_form - 2.0 * m0)});
      }
    }
  }
  s.le("plane_wave_plus", "gamma^a d_a Psi = -i m Psi on the + eigenspace (gamma and alpha forms)", plus,
       cfg.tol["dirac.plane"]);
  s.le("plane_wave_minus", "residual = 2 m0 on the - eigenspace", minus, cfg.tol["dirac.plane"]);

  double common = 0.0;
  int refused = 0;
  for (int n = 0; n < 100; ++n) {
    const FourVector w = random_timelike(rng);
    const SpinorState st = simultaneous_eigenvector(rep, rng.uniform(0.2, 3.0) * w, w);
    common = std::max({common, st.residual_v, st.residual_w});
    FourVector v = random_timelike(rng);
    try {
      simultaneous_eigenvector(rep, v, w);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotCommuting) ++refused;
    }
  }
  s.le("simultaneous_eigenvector", "common eigenvector of parallel slashed pairs", common, cfg.tol["dirac.eigen"]);
  s.flag("non_parallel_refused", "NotCommuting for non-parallel pairs", 100 - refused, 0, refused == 100);

  const Point base = random_base(rng);
  const Covector c(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
  const HamiltonJacobiField geo = construct_geodesic_W(1.0, base);
  HamiltonJacobiField spun = geo;
  spun.value = [geo, c](const Point& x) { return geo(x) + c.vec().dot(x); };
  spun.analytic_gradient = [geo, c](const Point& x) { return gradient(geo, x) + c; };
  const Congruence cong = Congruence::radial(base, 1.0);
  std::vector<Point> pts;
  for (int n = 0; n < 64; ++n) pts.push_back(uniform_point(rng, kGeodesicRegion));
  const PerpDecomposition dec = decompose_parallel_perp(spun, cong.tangent, pts);
  double comm = 0.0;
  for (const auto& x : pts) {
    comm = std::max(comm, frobenius_norm(commutator(slash(rep, gradient(dec.w_par, x)),
                                                    slash(rep, cong.tangent(x)).matrix)));
  }
  s.le("spin_shift", "[gamma^a dW_a, slash(d sigma)] = 0 after removing the spin constants",
       std::max(comm, (dec.spin - c).vec().cwiseAbs().maxCoeff()), cfg.tol["dirac.eigen"]);

  LieTransportOptions lopt;
  lopt.n_samples = cfg.verify.samples;
  lopt.lie_tol = cfg.tol["dirac.lie"];
  lopt.dirac_tol = cfg.tol["dirac.commutator"];
  const WaveFunction wf = WaveFunction::identity();
  int geodesic_pass = 0, shear_fail = 0, mixed = 0;
  double lie_worst = 0.0;
  json details = json::array();
  for (int n = 0; n < 10; ++n) {
    const Point b = random_base(rng);
    const HamiltonJacobiField w = construct_geodesic_W(1.0, b);
    Congruence congr = Congruence::radial(b, 1.0);
    if (n % 2 == 1) {
      congr = Congruence::from_initial_surface(
          0.0, [b](const Eigen::Vector3d& y) { return Eigen::Vector3d((y - b.tail<3>()) / (0.0 - b[0])); }, 1.0);
    }
    const LieTransportReport g = lie_transport_check(rep, congr, w, wf, kGeodesicRegion, rng, lopt);
    const LieTransportReport sh = lie_transport_check(rep, congr.with_shear(0.1), w, wf, kGeodesicRegion, rng, lopt);
    geodesic_pass += g.verdict == Verdict::BothPass;
    shear_fail += sh.verdict == Verdict::BothFail;
    mixed += (g.verdict == Verdict::Mixed) + (sh.verdict == Verdict::Mixed);
    lie_worst = std::max(lie_worst, g.lie_residual);
    details.push_back({{"geodesic", to_json(g)}, {"shear", to_json(sh)}});
  }
  s.le("lie_transport_geodesic", "L_u p = 0 on geodesic congruences", lie_worst, lopt.lie_tol);
  s.flag("lie_transport_verdicts", "L_u p = 0 iff the Dirac eigen-relation holds; no mixed verdicts",
         mixed, json{{"both_pass", 10}, {"both_fail", 10}, {"mixed", 0}},
         geodesic_pass == 10 && shear_fail == 10 && mixed == 0, details);

  const Point pb = random_base(rng);
  const std::array<bool, 3> planar{true, false, false};
  GeodesicOptions gopt;
  gopt.spatial_axes = planar;
  const HamiltonJacobiField pw = construct_geodesic_W(1.0, pb, gopt);
  const Covector drift_c(0.0, 0.0, 0.3, -0.2);
  HamiltonJacobiField drifted = pw;
  drifted.value = [pw, drift_c](const Point& x) { return pw(x) + drift_c.vec().dot(x); };
  drifted.analytic_gradient = [pw, drift_c](const Point& x) { return gradient(pw, x) + drift_c; };
  const Congruence dc = Congruence::radial(pb, 1.0, planar).with_drift(raise(drift_c));
  const LieTransportReport dr = lie_transport_check(rep, dc, drifted, wf, kGeodesicRegion, rng, lopt);
  s.flag("constant_drift", "p = m0 u + c with L_u c = 0 passes after the parallel part is extracted",
         dr.commutator_norm, lopt.dirac_tol, dr.verdict == Verdict::BothPass && dr.used_parallel_part,
         to_json(dr));
  return s;
}

double max_projectile_error(const HamiltonianModel& model, double g, double step) {
  const PhaseState start = projectile_launch(model, 1.0, 2.0);
  const Trajectory t = integrate(model, start, 2.0, step);
  double worst = 0.0;
  for (const auto& st : t.samples) {
    const PhaseState exact = projectile_exact(model.m0, g, start, st.s);
    worst = std::max(worst, (st.x.vec() - exact.x.vec()).cwiseAbs().maxCoeff());
  }
  return worst;
}

Suite dynamics_suite(const RunConfig& cfg) {
  Suite s{"dynamics", {}};
  const GammaRep rep = build_gamma_rep();
  const double m0 = 1.0, g = 1.0;

  const HamiltonianModel arc = HamiltonianModel::projectile_arclength(m0, g);
  const PhaseState arc0 = projectile_launch(arc, 1.0, 2.0);
  const Trajectory at = integrate(arc, arc0, 2.0, cfg.verify.step);
  double dy = 0.0;
  for (const auto& st : at.samples) {
    dy = std::max(dy, std::abs(st.x[2] - (2.0 * st.s - 0.5 * g * st.s * st.s)));
  }
  s.le("projectile_closed_form", "y = y0 + u_y s - g s^2 / 2", dy, cfg.tol["dynamics.oracle"]);

  const HamiltonianModel rel = HamiltonianModel::projectile(m0, g);
  s.le("relativistic_projectile", "RK4 against the exact flow of sqrt(m0^2 + p^2) + m0 g y",
       max_projectile_error(rel, g, cfg.verify.step), cfg.tol["dynamics.oracle"]);

  const double coarse = max_projectile_error(rel, g, cfg.verify.ratio_step);
  const double fine = max_projectile_error(rel, g, 0.5 * cfg.verify.ratio_step);
  const double ratio = coarse / fine;
  s.flag("rk4_order", "halving the step divides the error by about 16", ratio,
         json::array({cfg.tol["dynamics.ratio_lo"], cfg.tol["dynamics.ratio_hi"]}),
         ratio >= cfg.tol["dynamics.ratio_lo"] && ratio <= cfg.tol["dynamics.ratio_hi"],
         {{"coarse_error", coarse}, {"fine_error", fine}});

  // Free particle launched tangentially in the polar chart.
  const PhaseState polar0{FourVector(0.0, 1.0, 0.0, 0.0), FourVector(std::sqrt(1.25), 0.0, 0.5, 0.0), 0.0};
  const CovariantTrajectory ct = covariant_integrate(MetricField::polar(), CoordinateChart::polar(), {},
                                                    polar0, 1.0, 1e-3);
  const Eigen::Vector4d v0 = CoordinateChart::polar().jacobian(polar0.x.vec()) * polar0.p.vec();
  double line = 0.0;
  for (std::size_t k = 0; k < ct.cartesian.size(); ++k) {
    const Point expected = Point(0.0, 1.0, 0.0, 0.0) + ct.chart.samples[k].s * v0;
    line = std::max(line, (ct.cartesian[k] - expected).cwiseAbs().maxCoeff());
  }
  s.le("polar_chart_line", "covariant polar-chart free motion is a Cartesian straight line", line,
       cfg.tol["dynamics.chart"]);
  s.le("polar_chart_invariant", "g_{mu nu} p^mu p^nu / 2 conserved", ct.K_drift, cfg.tol["dynamics.drift"]);

  const PhaseState q0{FourVector(0.0, 0.1, 0.2, 0.3), FourVector(1.5, 0.3, -0.2, 0.1), 0.0};
  const CovariantTrajectory mk = covariant_integrate(MetricField::minkowski(), CoordinateChart::identity(), {},
                                                    q0, 1.0, 1e-3);
  const Trajectory qt = integrate(HamiltonianModel::quadratic(), q0, 1.0, 1e-3);
  double same = 0.0;
  for (std::size_t k = 0; k < qt.size(); ++k) {
    same = std::max({same, (qt.samples[k].x.vec() - mk.chart.samples[k].x.vec()).cwiseAbs().maxCoeff(),
                     (qt.samples[k].p.vec() - mk.chart.samples[k].p.vec()).cwiseAbs().maxCoeff()});
  }
  s.le("minkowski_covariant_matches", "Gamma = 0 reduces the covariant run to the tetrad run", same, 1e-10);

  const PhaseState h0{FourVector(0.0, 1.0, 0.0, 0.0), FourVector(0.0, 0.0, 0.0, 0.0), 0.0};
  const Trajectory ht = integrate(HamiltonianModel::harmonic(), h0, 10.0, 1e-3);
  s.le("energy_conservation", "H conserved over 10^4 RK4 steps", ht.energy_drift, cfg.tol["dynamics.drift"]);

  const HamiltonianModel fr = HamiltonianModel::free(m0);
  const Trajectory ft = integrate(fr, {FourVector(0, 0, 0, 0), FourVector(std::sqrt(2.0), 1.0, 0.0, 0.0), 0.0}, 1.0, 1e-2);
  const Trajectory dt = integrate(HamiltonianModel::dilation(0.3),
                                  {FourVector(0.1, 0.2, 0.0, 0.0), FourVector(1.2, 0.4, 0.1, 0.0), 0.0}, 1.0, 1e-2);
  double zero = 0.0;
  for (double c : ft.comm_norm) zero = std::max(zero, c);
  for (double c : dt.comm_norm) zero = std::max(zero, c);
  s.le("commutator_vanishes", "[slash p, slash pdot] = 0 on geodesics and for pdot = g p", zero,
       cfg.tol["dynamics.commutator"]);

  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < at.size(); ++k) {
    if (at.samples[k].s > 0.1) smallest = std::min(smallest, normalized_commutator(rep, at.samples[k].p, at.pdot[k]));
  }
  s.flag("commutator_projectile", "[slash p, slash pdot] != 0 along the projectile", smallest,
         cfg.tol["dynamics.noncommuting"], smallest > cfg.tol["dynamics.noncommuting"]);

  const ForceDiagnostic fd = force_diagnostic(ft, ft.size() / 2);
  s.flag("free_force_null", "dm/ds = |f| = 0 on a geodesic", fd.dm_ds, 0.0,
         fd.dm_ds == 0.0 && fd.classification == CausalType::Null);

  const HessianCheck hc = hessian_det_check(construct_geodesic_W(1.0, Point(-3.0, 0.0, 0.0, 0.0)),
                                            Point(1.5, 1.0, 0.2, -0.1));
  s.flag("hessian_nondegenerate", "det(d^2 W / dx^a dx^b) != 0 for the geodesic field", hc.det,
         "|det| > 1e-10 scale^3", hc.ok);
  return s;
}

Suite statmech_suite(const RunConfig& cfg) {
  Suite s{"statmech", {}};
  EnsembleConfig ec;
  ec.n = cfg.verify.ensemble_n;
  ec.m0 = 1.0;
  ec.T = 2.0;
  ec.seed = cfg.seed;
  const MomentReport mr = moments(sample_mb(ec), ec.axis_variance());
  double zvar = 0.0;
  for (const auto& a : mr.axes) {
    zvar = std::max(zvar, std::abs(a.variance - ec.axis_variance()) /
                              (ec.axis_variance() * std::sqrt(2.0 / (static_cast<double>(ec.n) - 1.0))));
  }
  s.le("mb_variance", "per-axis variance kB T / (2 m0), in standard errors", zvar, cfg.tol["statmech.se"],
       to_json(mr));

  std::array<double, 3> var{};
  const std::array<double, 3> temps{1.0, 2.0, 4.0};
  for (std::size_t k = 0; k < 3; ++k) {
    EnsembleConfig e = ec;
    e.T = temps[k];
    e.seed = cfg.seed + 1000 + k;
    const MomentReport r = moments(sample_mb(e), e.axis_variance());
    var[k] = (r.axes[0].variance + r.axes[1].variance + r.axes[2].variance) / 3.0;
  }
  const double ratio_err = std::max(std::abs(var[1] / var[0] - 2.0) / 2.0, std::abs(var[2] / var[0] - 4.0) / 4.0);
  s.le("variance_tracks_temperature", "population variance proportional to T (ratios 1:2:4)", ratio_err,
       cfg.tol["statmech.ratio"]);

  auto binom = [](int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  double comb = 0.0;
  for (int L = 1; L <= 5; ++L) {
    std::vector<double> levels;
    for (int l = 0; l < L; ++l) levels.push_back(0.3 * l);
    for (int n = 0; n <= 5; ++n) {
      const auto be = partition_enumerate(levels, n, 1.0, Statistics::BoseEinstein);
      const auto fdt = partition_enumerate(levels, n, 1.0, Statistics::FermiDirac);
      const auto mb = partition_enumerate(levels, n, 1.0, Statistics::Distinguishable);
      double z1 = 0.0;
      for (double e : levels) z1 += std::exp(-e);
      comb = std::max({comb, std::abs(static_cast<double>(be.states.size()) - binom(n + L - 1, n)),
                       std::abs(static_cast<double>(fdt.states.size()) - binom(L, n)),
                       std::abs(mb.Z - std::pow(z1, n)) / std::pow(z1, n)});
    }
  }
  s.le("occupation_counts", "C(n+L-1, n), C(L, n) and Z_MB = Z_1^n", comb, cfg.tol["statmech.combinatorial"]);

  Rng rng(cfg.seed, 6);
  const double theta = 2.5;
  std::vector<double> times{0.0};
  for (int k = 0; k < 100000; ++k) times.push_back(times.back() + rng.exponential(theta));
  const double est = exp_arrival_estimator(times);
  s.le("arrival_estimator", "theta_hat = n / (t_n - t_0), in standard errors",
       std::abs(est - theta) / (theta / std::sqrt(1e5)), cfg.tol["statmech.se"]);

  Grid3 grid;
  grid.lo = Eigen::Vector3d::Constant(-6.0);
  grid.hi = Eigen::Vector3d::Constant(6.0);
  grid.n = 60;
  const auto gauss = [](const Eigen::Vector3d& x, double) { return std::exp(-x.squaredNorm()); };
  const SliceNormalization sn = slice_normalize(gauss, 0.0, grid);
  s.le("slice_normalization", "integral of exp(-|x|^2) over a slice = pi^(3/2)",
       std::abs(sn.constant - std::pow(std::numbers::pi, 1.5)), cfg.tol["statmech.slice"]);

  const HamiltonianModel arc = HamiltonianModel::projectile_arclength(1.0, 1.0);
  const Trajectory t = integrate(arc, projectile_launch(arc, 1.0, 2.0), 2.0, 1e-3);
  const EigenSolutionReport er = eigen_solution_check(0.1, t);
  s.le("eigen_solution_chain_rule", "d psi/ds = k psi (pdot.p) for psi = exp((k/2) p.p)", er.chain_residual,
       cfg.tol["statmech.slice"], to_json(er));
  return s;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using SuiteFn = Suite (*)(const RunConfig&);
  const std::vector<std::pair<std::string, SuiteFn>> all{
      {"clifford", clifford_suite}, {"geometry", geometry_suite}, {"hj", hj_suite},
      {"dirac", dirac_suite},       {"dynamics", dynamics_suite}, {"statmech", statmech_suite}};

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "verify";
  report["effective_config"] = cfg.effective();
  json suites = json::object();
  bool ok = true;
  std::string summary;
  for (const auto& [name, fn] : all) {
    if (cfg.suite != "all" && cfg.suite != name) continue;
    Suite s;
    try {
      s = fn(cfg);
    } catch (const Error& e) {
      s.name = name;
      s.flag("suite_error", "suite raised an error", std::numeric_limits<double>::quiet_NaN(), nullptr, false,
             e.what());
    }
    suites[name] = s.to_json();
    ok = ok && s.pass();
    for (const auto& c : s.checks) {
      summary += std::string(c.pass ? "PASS " : "FAIL ") + name + "/" + c.name + " residual=" +
                 format_number(c.residual) + " tol=" + c.tolerance.dump() + "\n";
    }
  }
  report["suites"] = suites;
  report["pass"] = ok;

  if (cfg.out_dir) {
    write_atomic(*cfg.out_dir / "verify_report.json", dump_json(report));
    out << summary;
  } else {
    out << dump_json(report);
  }
  if (!ok) err << "verification failed\n";
  return ok ? kOk : kCheckFailed;
}

}  // namespace hjdirac::cli
