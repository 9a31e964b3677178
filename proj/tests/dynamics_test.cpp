#include <doctest.h>

#include "hjdirac/dynamics.hpp"
#include "hjdirac/error.hpp"

#include <cmath>

using namespace hjdirac;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

// 4 sqrt(sum_{a<b} (p^a q^b - p^b q^a)^2): distinct gamma^a gamma^b are
// Frobenius-orthogonal with norm 2 each.
double bivector_commutator_norm(const FourVector& p, const FourVector& q) {
  double sum = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const double c = p[a] * q[b] - p[b] * q[a];
      sum += c * c;
    }
  return 4.0 * std::sqrt(sum);
}

double max_position_error(const HamiltonianModel& model, double g, double step) {
  const PhaseState start = projectile_launch(model, 1.0, 2.0);
  const Trajectory t = integrate(model, start, 2.0, step);
  double worst = 0.0;
  for (const auto& st : t.samples) {
    worst = std::max(worst, (st.x.vec() - projectile_exact(model.m0, g, start, st.s).x.vec()).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("Hamilton's equations by hand") {
  const PhaseState free_state{FourVector(0.3, 1, -2, 0.5), FourVector(std::sqrt(2.0), 1, 0, 0), 0.0};
  const PhaseDerivative f = hamilton_rhs(HamiltonianModel::free(1.0), free_state);
  CHECK(f.dp.vec().cwiseAbs().maxCoeff() < 1e-15);
  // dx^i/ds = eta^{ii} p^i / H
  CHECK(f.dx[1] == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(f.dx[0] == 0.0);

  const double m0 = 2.0, g = 0.5;
  const PhaseDerivative pr =
      hamilton_rhs(HamiltonianModel::projectile(m0, g), {FourVector(0, 0, 1, 0), FourVector(3, 1, 1, 0), 0.0});
  CHECK(pr.dp[2] == doctest::Approx(m0 * g));
  CHECK(pr.dp[1] == 0.0);

  const FourVector p(1.5, 0.2, -0.4, 0.9);
  const PhaseDerivative q = hamilton_rhs(HamiltonianModel::quadratic(), {FourVector(1, 2, 3, 4), p, 0.0});
  CHECK((q.dx.vec() - p.vec()).cwiseAbs().maxCoeff() < 1e-12);

  SUBCASE("difference partials on a custom model") {
    HamiltonianModel custom = HamiltonianModel::quadratic();
    custom.dH_dp = nullptr;
    custom.dH_dx = nullptr;
    const PhaseDerivative d = hamilton_rhs(custom, {FourVector(1, 2, 3, 4), p, 0.0});
    CHECK((d.dx.vec() - p.vec()).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("non-finite partial") {
    HamiltonianModel bad = HamiltonianModel::quadratic();
    bad.dH_dx = [](const FourVector&, const FourVector&, double) {
      return Eigen::Vector4d(0, std::nan(""), 0, 0);
    };
    CHECK(kind_of([&] { hamilton_rhs(bad, {FourVector(), p, 0.0}); }) == ErrorKind::PartialEvaluationFailure);
  }
}

TEST_CASE("free particle integrates exactly") {
  const PhaseState s0{FourVector(0, 0, 0, 0), FourVector(std::sqrt(2.0), 1, 0, 0), 0.0};
  const Trajectory t = integrate(HamiltonianModel::free(1.0), s0, 3.0, 0.01);
  for (const auto& st : t.samples) {
    CHECK((st.p.vec() - s0.p.vec()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(st.x[1] == doctest::Approx(-st.s / std::sqrt(2.0)).epsilon(1e-12));
  }
  for (double c : t.comm_norm) CHECK(c == 0.0);
  for (double d : t.dm_ds) CHECK(d == 0.0);
}

TEST_CASE("step bookkeeping") {
  const PhaseState s0{FourVector(), FourVector(1, 0, 0, 0), 0.0};
  const Trajectory t = integrate(HamiltonianModel::quadratic(), s0, 1.0, 0.3);
  REQUIRE(t.size() == 5);
  CHECK(t.samples[3].s == doctest::Approx(0.9));
  CHECK(t.samples[4].s == 1.0);
  CHECK(kind_of([&] { integrate(HamiltonianModel::quadratic(), s0, 1.0, 0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { integrate(HamiltonianModel::quadratic(), s0, -1.0, 0.1); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { integrate(HamiltonianModel::dilation(0.2), s0, 1.0, 0.1, Integrator::Leapfrog); }) ==
        ErrorKind::NonSeparable);
}

TEST_CASE("blow-up is rejected") {
  HamiltonianModel runaway;
  runaway.name = "runaway";
  runaway.H = [](const FourVector&, const FourVector&, double) { return 0.0; };
  runaway.dH_dx = [](const FourVector&, const FourVector&, double) { return Eigen::Vector4d::Zero().eval(); };
  // dx^1/ds = exp(x^1) reaches infinity at s = 1
  runaway.dH_dp = [](const FourVector& x, const FourVector&, double) {
    return Eigen::Vector4d(0, -std::exp(x[1]), 0, 0);
  };
  CHECK_THROWS_AS(integrate(runaway, {FourVector(), FourVector(), 0.0}, 2.0, 0.01), Error);
}

TEST_CASE("projectile along arclength") {
  const double m0 = 1.0, g = 1.0;
  const HamiltonianModel model = HamiltonianModel::projectile_arclength(m0, g);
  const PhaseState start = projectile_launch(model, 1.0, 2.0, Point(0, 0, 0.5, 0));
  const Trajectory t = integrate(model, start, 2.0, 1e-3);
  for (const auto& st : t.samples) {
    CHECK(std::abs(st.x[2] - (0.5 + 2.0 * st.s - 0.5 * g * st.s * st.s)) < 1e-9);
    CHECK(std::abs(st.x[1] - st.s) < 1e-9);
  }
  CHECK(t.samples.back().x[2] == doctest::Approx(2.5));
}

TEST_CASE("relativistic projectile") {
  const double m0 = 1.3, g = 0.7;
  const HamiltonianModel model = HamiltonianModel::projectile(m0, g);
  const PhaseState start = projectile_launch(model, 1.0, 2.0);

  SUBCASE("closed form solves Hamilton's equations") {
    for (double s : {0.2, 0.9, 1.7}) {
      const double h = 1e-5;
      const PhaseState a = projectile_exact(m0, g, start, s - h), b = projectile_exact(m0, g, start, s + h);
      const PhaseDerivative d = hamilton_rhs(model, projectile_exact(m0, g, start, s));
      CHECK(((b.x.vec() - a.x.vec()) / (2 * h) - d.dx.vec()).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(((b.p.vec() - a.p.vec()) / (2 * h) - d.dp.vec()).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(model.H(b.x, b.p, s) == doctest::Approx(model.H(start.x, start.p, 0.0)).epsilon(1e-12));
    }
  }
  SUBCASE("RK4 error") {
    CHECK(max_position_error(model, g, 1e-3) < 1e-9);
    const double ratio = max_position_error(model, g, 0.1) / max_position_error(model, g, 0.05);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
    CHECK(max_position_error(model, g, 0.5) > 1e-9);
  }
  SUBCASE("commutator along the flight") {
    const GammaRep rep = build_gamma_rep();
    const Trajectory t = integrate(model, start, 2.0, 1e-2);
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK(t.comm_norm[k] == doctest::Approx(bivector_commutator_norm(t.samples[k].p, t.pdot[k])).epsilon(1e-12));
      if (t.samples[k].s > 0.1) CHECK(t.comm_norm[k] > 0.1 * m0 * m0 * g);
    }
    CHECK(normalized_commutator(rep, t.samples[50].p, t.pdot[50]) > 1e-3);
  }
}

TEST_CASE("energy conservation") {
  const PhaseState s0{FourVector(0, 1, 0, 0), FourVector(), 0.0};
  const Trajectory rk = integrate(HamiltonianModel::harmonic(), s0, 10.0, 1e-3);
  CHECK(rk.size() == 10001);
  CHECK(rk.energy_drift < 1e-8);
  for (std::size_t k = 0; k < rk.size(); k += 500) {
    CHECK(rk.samples[k].x[1] == doctest::Approx(std::cos(rk.samples[k].s)).epsilon(1e-9));
    CHECK(rk.samples[k].p[1] == doctest::Approx(std::sin(rk.samples[k].s)).scale(1).epsilon(1e-9));
  }
  const Trajectory lf = integrate(HamiltonianModel::harmonic(), s0, 100.0, 1e-2, Integrator::Leapfrog);
  CHECK(lf.energy_drift < 1e-4);
  CHECK(lf.energy_drift > 0.0);
}

TEST_CASE("covariant runs") {
  SUBCASE("Minkowski in the identity chart matches the tetrad run") {
    const PhaseState q0{FourVector(0.0, 0.1, 0.2, 0.3), FourVector(1.5, 0.3, -0.2, 0.1), 0.0};
    const CovariantTrajectory c =
        covariant_integrate(MetricField::minkowski(), CoordinateChart::identity(), {}, q0, 1.0, 1e-2);
    const Trajectory t = integrate(HamiltonianModel::quadratic(), q0, 1.0, 1e-2);
    REQUIRE(c.chart.size() == t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK((c.chart.samples[k].x.vec() - t.samples[k].x.vec()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((c.chart.samples[k].p.vec() - t.samples[k].p.vec()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("polar chart free motion is straight") {
    const CoordinateChart chart = CoordinateChart::polar();
    const PhaseState s0{FourVector(0, 1, 0, 0), FourVector(std::sqrt(1.25), 0, 0.5, 0), 0.0};
    const CovariantTrajectory c = covariant_integrate(MetricField::polar(), chart, {}, s0, 1.0, 1e-3);
    const Eigen::Vector4d v = chart.jacobian(s0.x.vec()) * s0.p.vec();
    for (std::size_t k = 0; k < c.cartesian.size(); ++k) {
      const Point expected = Point(0, 1, 0, 0) + c.chart.samples[k].s * v;
      CHECK((c.cartesian[k] - expected).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((chart.to_cartesian(c.chart.samples[k].x.vec()) - c.cartesian[k]).norm() < 1e-15);
    }
    CHECK(c.K_drift < 1e-8);
    // free motion: tetrad momentum is constant, so the diagnostics vanish
    for (double d : c.chart.dm_ds) CHECK(d < 1e-6);
  }
  SUBCASE("potential in the rescaled-time chart agrees with the Cartesian run") {
    CovariantModel cm;
    cm.m0 = 1.0;
    cm.V = [](const Point& x) { return 0.5 * x[1] * x[1]; };
    const CoordinateChart chart = CoordinateChart::rescaled_time(2.0);
    const PhaseState cart0{FourVector(0, 1, 0, 0), FourVector(1, 0, 0, 0), 0.0};
    const CovariantTrajectory flat =
        covariant_integrate(MetricField::minkowski(), CoordinateChart::identity(), cm, cart0, 1.0, 1e-3);
    const PhaseState chart0{FourVector(0, 1, 0, 0), FourVector(2, 0, 0, 0), 0.0};
    const CovariantTrajectory scaled = covariant_integrate(chart.induced_metric(), chart, cm, chart0, 1.0, 1e-3);
    for (std::size_t k = 0; k < flat.cartesian.size(); ++k)
      CHECK((flat.cartesian[k] - scaled.cartesian[k]).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("leaving the chart") {
    const PhaseState inward{FourVector(0, 0.5, 0, 0), FourVector(std::sqrt(2.0), -1, 0, 0), 0.0};
    CHECK(kind_of([&] {
            covariant_integrate(MetricField::polar(), CoordinateChart::polar(), {}, inward, 2.0, 1e-2);
          }) == ErrorKind::ChartBoundary);
  }
}

TEST_CASE("commutator criterion") {
  const GammaRep rep = build_gamma_rep();
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const FourVector p(rng.uniform(1, 3), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(operator_commutator(rep, p, FourVector()) == 0.0);
    CHECK(operator_commutator(rep, p, rng.uniform(-2, 2) * p) < 1e-12);
    const FourVector q(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(operator_commutator(rep, p, q) == doctest::Approx(bivector_commutator_norm(p, q)).epsilon(1e-12));
    CHECK(operator_commutator(rep, p, q, 2.0, Complex(0, 3)) ==
          doctest::Approx(6.0 * bivector_commutator_norm(p, q)).epsilon(1e-12));
  }
  CHECK(normalized_commutator(rep, FourVector(1, 0, 0, 0), FourVector()) == 0.0);

  const Trajectory d = integrate(HamiltonianModel::dilation(0.4), {FourVector(0.1, 0.2, 0, 0), FourVector(1.2, 0.4, 0.1, 0), 0.0},
                                 1.0, 1e-2);
  for (double c : d.comm_norm) CHECK(c < 1e-12);
  // dp/ds = rate p
  CHECK(d.samples.back().p[1] == doctest::Approx(0.4 * std::exp(0.4)).epsilon(1e-9));
}

TEST_CASE("force diagnostic") {
  const ForceDiagnostic t = force_diagnostic(FourVector(0.7, 0, 0, 0));
  CHECK(t.dm_ds == doctest::Approx(0.7));
  CHECK(t.classification == CausalType::Timelike);
  CHECK(force_diagnostic(FourVector(0, 1, 0, 0)).classification == CausalType::Spacelike);

  const Trajectory free = integrate(HamiltonianModel::free(1.0), {FourVector(), FourVector(2, 1, 1, 0), 0.0}, 1.0, 0.1);
  const ForceDiagnostic f = force_diagnostic(free, 4);
  CHECK(f.dm_ds == 0.0);
  CHECK(f.classification == CausalType::Null);
  CHECK(kind_of([&] { force_diagnostic(free, 0); }) == ErrorKind::BoundaryIndex);
  CHECK(kind_of([&] { force_diagnostic(free, free.size() - 1); }) == ErrorKind::BoundaryIndex);

  const double m0 = 1.0, g = 2.0;
  const HamiltonianModel model = HamiltonianModel::projectile(m0, g);
  const Trajectory pt = integrate(model, projectile_launch(model, 1.0, 2.0), 1.0, 1e-3);
  const ForceDiagnostic pf = force_diagnostic(pt, 500);
  CHECK(pf.f[2] == doctest::Approx(m0 * g).epsilon(1e-6));
  CHECK(std::abs(pf.f[1]) < 1e-9);
  CHECK(pf.dm_ds == doctest::Approx(m0 * g).epsilon(1e-6));
  CHECK(pf.classification == CausalType::Spacelike);
}

TEST_CASE("Hessian determinant") {
  const HessianCheck geo = hessian_det_check(construct_geodesic_W(1.0, Point::Zero()), Point(3.0, 0.5, -0.4, 0.2));
  CHECK(geo.ok);
  // analytic: spatial block is -(I/s + x x^T / s^3), determinant -(1 + |x|^2/s^2)/s^3
  const double r2 = 0.25 + 0.16 + 0.04, s2 = 9.0 - r2;
  CHECK(geo.det == doctest::Approx(-(1.0 + r2 / s2) / std::pow(s2, 1.5)).epsilon(1e-10));

  const HessianCheck pw = hessian_det_check(plane_wave_field(Eigen::Vector3d(1, 2, 3)), Point(1, 1, 1, 1));
  CHECK(pw.det == 0.0);
  CHECK_FALSE(pw.ok);

  Polynomial4 half;
  half.terms = {{0.5, {0, 2, 0, 0}}, {0.5, {0, 0, 2, 0}}, {0.5, {0, 0, 0, 2}}};
  const HessianCheck q = hessian_det_check(polynomial_field(half), Point(0.2, 1, 2, 3));
  CHECK(q.det == doctest::Approx(1.0));
  CHECK(q.ok);
}
