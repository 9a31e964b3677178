#include <doctest.h>

#include "hjdirac/dirac_ops.hpp"
#include "hjdirac/error.hpp"

#include <cmath>

using namespace hjdirac;

namespace {

const Complex I(0.0, 1.0);
const Box kRegion{Point(1.0, 0.5, -0.5, -0.5), Point(2.0, 1.5, 0.5, 0.5)};

FourVector unit_from(const Point& base, const Point& x) {
  const Eigen::Vector4d l = x - base;
  return FourVector(l / std::sqrt(l[0] * l[0] - l.tail<3>().squaredNorm()));
}

HamiltonJacobiField plus_linear(const HamiltonJacobiField& w, const Covector& c) {
  HamiltonJacobiField out = w;
  out.value = [w, c](const Point& x) { return w(x) + c.vec().dot(x); };
  out.analytic_gradient = [w, c](const Point& x) { return gradient(w, x) + c; };
  out.analytic_hessian = w.analytic_hessian;
  return out;
}

FourVector random_timelike(Rng& rng) {
  const Eigen::Vector3d q(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  return FourVector(q.norm() + rng.uniform(0.2, 2.0), q[0], q[1], q[2]);
}

}  // namespace

TEST_CASE("slashed gradient of psi(W)") {
  const GammaRep rep = build_gamma_rep();
  const Point base(-3, 0, 0, 0);
  const HamiltonJacobiField w = construct_geodesic_W(2.0, base);
  const Point x(1.2, 0.8, 0.1, -0.3);

  const CMat4 id = dirac_slash_gradient(rep, WaveFunction::identity(), w, x);
  CHECK(max_abs(id - 2.0 * slash(rep, unit_from(base, x)).matrix) < 1e-12);
  CHECK(max_abs(dirac_slash_gradient(rep, WaveFunction::constant(3.0), w, x)) == 0.0);

  const WaveFunction e = WaveFunction::exponential(1.0, I);
  const CMat4 m = dirac_slash_gradient(rep, e, w, x);
  CHECK(max_abs(m - I * std::exp(I * w(x)) * id) < 1e-12);
}

TEST_CASE("split along a curve") {
  const GammaRep rep = build_gamma_rep();

  SUBCASE("geodesic with its own field: scalar only") {
    const Point base(-3, 0, 0, 0);
    const double m0 = 1.5;
    const HamiltonJacobiField w = construct_geodesic_W(m0, base);
    const FourVector u(1.0, 0.3, -0.2, 0.1);
    const Curve c = Curve::straight(base, u);
    const WaveFunction psi = WaveFunction::exponential(1.0, 0.2);
    const double s = 3.0;
    const CurveSplit sp = split_along_curve(rep, c, psi, w, s);
    CHECK(max_abs(sp.wedge) < 1e-12);
    CHECK(std::abs(sp.scalar - m0 * psi.psi_prime(w(c.position(s)))) < 1e-12);
    CHECK(std::abs(sp.scalar - sp.along_curve) < 1e-6);
    CHECK(sp.reconstruction_residual < 1e-12);
  }
  SUBCASE("projectile curve and field") {
    const ProjectileField proj(1.0, 1.0, 2.0, 1.0);
    const WaveFunction psi = WaveFunction::exponential(1.0, 0.2);
    const CurveSplit sp = split_along_curve(rep, Curve::projectile(proj), psi, proj.at(1.0), 1.0);
    CHECK(std::abs(sp.scalar - sp.along_curve) < 1e-6);
    CHECK(sp.derivative_residual < 1e-6);
    CHECK(sp.reconstruction_residual < 1e-12);
    CHECK(std::abs(sp.wedge_trace) < 1e-12);
  }
  SUBCASE("transverse field on the time axis") {
    Polynomial4 p;
    p.terms = {{0.3, {0, 1, 0, 0}}};
    const HamiltonJacobiField w = polynomial_field(p);
    const CurveSplit sp =
        split_along_curve(rep, Curve::straight(Point::Zero(), FourVector(1, 0, 0, 0)), WaveFunction::identity(), w, 0.5);
    CHECK(std::abs(sp.scalar) < 1e-15);
    CHECK(max_abs(sp.wedge - 0.3 * rep[0] * rep[1]) < 1e-15);
    CHECK(max_abs(sp.wedge) > 0.1);
  }
}

TEST_CASE("simultaneous eigenvectors") {
  const GammaRep rep = build_gamma_rep();

  const SpinorState rest = simultaneous_eigenvector(rep, FourVector(1, 0, 0, 0), FourVector(1, 0, 0, 0));
  CHECK((rest.xi - Bispinor(1, 0, 0, 0)).norm() < 1e-15);

  const FourVector w(2, 1, 0, 0);
  const SpinorState st = simultaneous_eigenvector(rep, 2.0 * w, w);
  CHECK(std::abs(st.eigenvalue_w - std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(st.eigenvalue_v - 2.0 * std::sqrt(3.0)) < 1e-12);
  CHECK(st.residual_v < 1e-12);
  CHECK(st.residual_w < 1e-12);

  try {
    simultaneous_eigenvector(rep, FourVector(1, 0, 0, 0), FourVector(1, 0.5, 0, 0));
    FAIL("expected NotCommuting");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCommuting);
  }

  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const FourVector u = random_timelike(rng);
    const double c = rng.uniform(-3, 3);
    if (std::abs(c) < 1e-3) continue;
    const SpinorState s = simultaneous_eigenvector(rep, c * u, u);
    CHECK(s.residual_v < 1e-10);
    CHECK(s.residual_w < 1e-10);
    CHECK_THROWS_AS(simultaneous_eigenvector(rep, random_timelike(rng), u), Error);
  }
}

TEST_CASE("plane-wave Dirac residual") {
  const GammaRep rep = build_gamma_rep();

  SUBCASE("rest frame upper spinor") {
    const DiracResidual r = conventional_dirac_residual(rep, I, 1.0, FourVector(1, 0, 0, 0), Bispinor(1, 0, 0, 0));
    CHECK(r.gamma_form < 1e-12);
    CHECK(r.alpha_form < 1e-12);
  }
  SUBCASE("boosted momentum") {
    const FourVector p(std::sqrt(2.0), 1, 0, 0);
    const Eigensystem es = slash_eigensystem(rep, p);
    for (int k = 0; k < 4; ++k) {
      const DiracResidual r = conventional_dirac_residual(rep, I, 1.0, p, es.pairs[static_cast<std::size_t>(k)].vector);
      if (k < 2) {
        CHECK(r.gamma_form < 1e-10);
        CHECK(r.alpha_form < 1e-10);
      } else {
        CHECK(r.gamma_form == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(r.alpha_form == doctest::Approx(2.0).epsilon(1e-10));
      }
    }
  }
  SUBCASE("random on-shell momenta") {
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
      const double m0 = rng.uniform(0.3, 3.0);
      const Eigen::Vector3d q(rng.normal(), rng.normal(), rng.normal());
      const FourVector p(std::sqrt(m0 * m0 + q.squaredNorm()), q[0], q[1], q[2]);
      const Eigensystem es = slash_eigensystem(rep, p);
      CHECK(conventional_dirac_residual(rep, I, m0, p, es.pairs[0].vector).gamma_form < 1e-10);
      CHECK(conventional_dirac_residual(rep, I, m0, p, es.pairs[3].vector).gamma_form ==
            doctest::Approx(2 * m0).epsilon(1e-10));
    }
  }
  SUBCASE("off shell") {
    try {
      conventional_dirac_residual(rep, I, 1.0, FourVector(2, 0, 0, 0), Bispinor(1, 0, 0, 0));
      FAIL("expected OffShell");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OffShell);
    }
  }
}

TEST_CASE("Lie derivative") {
  Rng rng(7);
  const Congruence flat = Congruence::uniform(FourVector(2, 1, 0, 0), 1.0);
  CHECK(lie_derivative(flat, Point(0.1, 0.2, 0.3, 0.4)).vec().norm() == 0.0);

  const Point base(-3, 0.1, 0, 0);
  const Congruence radial = Congruence::radial(base, 1.0);
  for (int i = 0; i < 20; ++i) CHECK(lie_derivative(radial, uniform_point(rng, kRegion)).vec().norm() < 1e-6);

  Congruence tilted = Congruence::uniform(FourVector(1, 0, 0, 0), 1.0);
  tilted.momentum = [](const Point& x) { return FourVector(1.0, 0.1 * x[0], 0.0, 0.0); };
  const FourVector l = lie_derivative(tilted, Point(0.7, 0.2, 0.0, 0.0));
  CHECK((l.vec() - Eigen::Vector4d(0, 0.1, 0, 0)).norm() < 1e-9);

  SUBCASE("congruence from an initial surface matches the radial one") {
    const Congruence surf = Congruence::from_initial_surface(
        0.0, [base](const Eigen::Vector3d& y) { return Eigen::Vector3d((y - base.tail<3>()) / (-base[0])); }, 1.0);
    for (int i = 0; i < 10; ++i) {
      const Point x = uniform_point(rng, kRegion);
      CHECK((surf.tangent(x).vec() - radial.tangent(x).vec()).norm() < 1e-10);
      CHECK(lie_derivative(surf, x).vec().norm() < 1e-6);
    }
  }
  SUBCASE("stencil outside the domain") {
    Congruence limited = radial;
    limited.domain = [](const Point& x) { return x[0] < 1.0; };
    CHECK_THROWS_AS(lie_derivative(limited, Point(1.0, 0.5, 0, 0)), Error);
  }
}

TEST_CASE("Lie transport criterion") {
  const GammaRep rep = build_gamma_rep();
  Rng rng(8);
  for (int n = 0; n < 5; ++n) {
    const Point base(-3.0 - rng.uniform(), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
    const HamiltonJacobiField w = construct_geodesic_W(1.0, base);
    const Congruence c = Congruence::radial(base, 1.0);
    const LieTransportReport good = lie_transport_check(rep, c, w, WaveFunction::identity(), kRegion, rng);
    CHECK(good.verdict == Verdict::BothPass);
    CHECK(good.lie_residual < 1e-6);
    const LieTransportReport bad = lie_transport_check(rep, c.with_shear(0.1), w, WaveFunction::identity(), kRegion, rng);
    CHECK(bad.verdict == Verdict::BothFail);
  }
  CHECK(std::string(to_string(Verdict::Mixed)) == "mixed");

  SUBCASE("constant drift with spin constants") {
    const Point base(-3.5, 0.0, 0.0, 0.0);
    GeodesicOptions opt;
    opt.spatial_axes = {true, false, false};
    const Covector c(0.0, 0.0, 0.3, -0.2);
    const HamiltonJacobiField w = plus_linear(construct_geodesic_W(1.0, base, opt), c);
    const Congruence cong = Congruence::radial(base, 1.0, opt.spatial_axes).with_drift(raise(c));
    const LieTransportReport r = lie_transport_check(rep, cong, w, WaveFunction::identity(), kRegion, rng);
    CHECK(r.lie_pass);
    CHECK(r.raw_commutator_norm > 1e-3);
    CHECK(r.used_parallel_part);
    CHECK(r.dirac_pass);
    REQUIRE(r.spin);
    CHECK((r.spin->vec() - c.vec()).cwiseAbs().maxCoeff() < 1e-8);

    LieTransportOptions strict;
    strict.extract_parallel = false;
    CHECK(lie_transport_check(rep, cong, w, WaveFunction::identity(), kRegion, rng, strict).verdict ==
          Verdict::Mixed);
  }
}

TEST_CASE("spin constants commute away") {
  const GammaRep rep = build_gamma_rep();
  Rng rng(9);
  const Point base(-3.2, 0.1, 0.0, -0.1);
  const Covector c(0.2, -0.1, 0.4, 0.05);
  const HamiltonJacobiField w = plus_linear(construct_geodesic_W(1.0, base), c);
  std::vector<Point> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(uniform_point(rng, kRegion));
  const TangentField u = [base](const Point& x) { return unit_from(base, x); };
  const PerpDecomposition d = decompose_parallel_perp(w, u, pts);
  CHECK((d.spin - c).vec().cwiseAbs().maxCoeff() < 1e-10);
  for (const auto& x : pts) {
    CHECK(frobenius_norm(commutator(slash(rep, gradient(d.w_par, x)), slash(rep, u(x)).matrix)) < 1e-10);
    CHECK(frobenius_norm(commutator(slash(rep, gradient(w, x)), slash(rep, u(x)).matrix)) > 1e-3);
  }
}
