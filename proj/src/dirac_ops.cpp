#include "hjdirac/dirac_ops.hpp"

#include "hjdirac/error.hpp"

#include <algorithm>
#include <cmath>

namespace hjdirac {
namespace {

const Complex kI(0.0, 1.0);

double step_for(double coordinate) { return 1e-5 * std::max(1.0, std::abs(coordinate)); }

FourVector unit_velocity(const Eigen::Vector3d& v) {
  const double v2 = v.squaredNorm();
  if (!(v2 < 1.0)) throw Error(ErrorKind::InvalidArgument, "initial 3-velocity must be subluminal");
  const double gamma = 1.0 / std::sqrt(1.0 - v2);
  return FourVector(gamma, gamma * v[0], gamma * v[1], gamma * v[2]);
}

}  // namespace

WaveFunction WaveFunction::identity() {
  WaveFunction wf;
  wf.name = "identity";
  wf.psi = [](double w) { return Complex(w, 0.0); };
  wf.psi_prime = [](double) { return Complex(1.0, 0.0); };
  return wf;
}

WaveFunction WaveFunction::constant(Complex c) {
  WaveFunction wf;
  wf.name = "constant";
  wf.psi = [c](double) { return c; };
  wf.psi_prime = [](double) { return Complex(0.0, 0.0); };
  return wf;
}

WaveFunction WaveFunction::exponential(Complex amplitude, Complex kappa) {
  WaveFunction wf;
  wf.name = "exponential";
  wf.kappa = kappa;
  wf.psi = [amplitude, kappa](double w) { return amplitude * std::exp(kappa * w); };
  wf.psi_prime = [amplitude, kappa](double w) { return kappa * amplitude * std::exp(kappa * w); };
  return wf;
}

CMat4 dirac_slash_gradient(const GammaRep& rep, const WaveFunction& wf,
                           const HamiltonJacobiField& hj, const Point& x) {
  const Covector g = gradient(hj, x);
  return wf.psi_prime(hj(x)) * slash(rep, g);
}

Curve Curve::straight(const Point& x0, const FourVector& u) {
  const double n2 = norm2(u);
  if (!(n2 > kNullTolerance)) throw Error(ErrorKind::InvalidArgument, "straight curve needs a timelike direction");
  const FourVector unit = u * (1.0 / std::sqrt(n2));
  Curve c;
  c.position = [x0, unit](double s) { return Point(x0 + s * unit.vec()); };
  c.tangent = [unit](double) { return unit; };
  return c;
}

Curve Curve::projectile(const ProjectileField& field) {
  Curve c;
  c.position = [field](double s) { return field.position(s); };
  c.tangent = [field](double s) { return field.velocity(s); };
  return c;
}

CurveSplit split_along_curve(const GammaRep& rep, const Curve& curve, const WaveFunction& wf,
                             const HamiltonJacobiField& hj, double s) {
  const Point x = curve.position(s);
  const CMat4 su = slash(rep, curve.tangent(s)).matrix;
  const CMat4 grad = dirac_slash_gradient(rep, wf, hj, x);
  const CMat4 product = su * grad;

  CurveSplit out;
  out.scalar = product.trace() / 4.0;
  out.wedge = 0.5 * commutator(su, grad);
  out.reconstruction_residual = max_abs(product - out.scalar * CMat4::Identity() - out.wedge);
  out.wedge_trace = std::abs(out.wedge.trace());

  const double h = step_for(s);
  const Complex up = wf.psi(hj(curve.position(s + h)));
  const Complex down = wf.psi(hj(curve.position(s - h)));
  out.along_curve = (up - down) / (2.0 * h);
  out.derivative_residual = std::abs(out.scalar - out.along_curve);
  return out;
}

SpinorState simultaneous_eigenvector(const GammaRep& rep, const FourVector& v,
                                     const FourVector& w, double tol) {
  const CMat4 sv = slash(rep, v).matrix;
  const CMat4 sw = slash(rep, w).matrix;
  const double comm = frobenius_norm(commutator(sv, sw));
  if (comm > tol) {
    throw Error(ErrorKind::NotCommuting, "slashed operators do not commute (|[v, w]| = " +
                                             std::to_string(comm) + ")");
  }
  const FourVector& reference = std::abs(norm2(v)) >= std::abs(norm2(w)) ? v : w;
  SpinorState out;
  out.momentum = v;
  out.xi = slash_eigensystem(rep, reference).pairs.front().vector;
  out.eigenvalue_v = out.xi.dot(sv * out.xi);
  out.eigenvalue_w = out.xi.dot(sw * out.xi);
  out.residual_v = (sv * out.xi - out.eigenvalue_v * out.xi).norm();
  out.residual_w = (sw * out.xi - out.eigenvalue_w * out.xi).norm();
  return out;
}

DiracResidual conventional_dirac_residual(const GammaRep& rep, Complex kappa, double m0,
                                          const FourVector& p, const Bispinor& xi) {
  if (std::abs(norm2(p) - m0 * m0) > 1e-10 * std::max(1.0, m0 * m0)) {
    throw Error(ErrorKind::OffShell, "momentum is off the mass shell");
  }
  const double n = xi.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "spinor is zero");
  const Covector pl = lower(p);

  // gamma^a d_a Psi = -kappa gamma^a p_a Psi
  const Bispinor gamma_form = -kappa * (slash(rep, pl) * xi) + kI * m0 * xi;

  Bispinor alpha_form = kappa * pl[0] * xi - kI * m0 * (rep.alpha[0] * xi);
  for (int k = 1; k < 4; ++k) alpha_form += kappa * pl[k] * (rep.alpha[static_cast<std::size_t>(k)] * xi);

  return {gamma_form.norm() / n, alpha_form.norm() / n};
}

Congruence Congruence::uniform(const FourVector& u, double m0) {
  const double n2 = norm2(u);
  if (!(n2 > kNullTolerance)) throw Error(ErrorKind::InvalidArgument, "congruence tangent must be timelike");
  const FourVector unit = u * (1.0 / std::sqrt(n2));
  Congruence c;
  c.name = "uniform";
  c.tangent = [unit](const Point&) { return unit; };
  c.momentum = [unit, m0](const Point&) { return m0 * unit; };
  return c;
}

Congruence Congruence::radial(const Point& base_point, double m0, std::array<bool, 3> spatial_axes) {
  const Eigen::Vector4d mask(1.0, spatial_axes[0] ? 1.0 : 0.0, spatial_axes[1] ? 1.0 : 0.0,
                             spatial_axes[2] ? 1.0 : 0.0);
  auto tangent = [base_point, mask](const Point& x) {
    const FourVector d((x - base_point).cwiseProduct(mask));
    const double s2 = norm2(d);
    if (!(d[0] > 0.0) || !(s2 > 0.0)) {
      throw Error(ErrorKind::NonTimelikeSeparation, "point outside the future cone of the base event");
    }
    return d * (1.0 / std::sqrt(s2));
  };
  Congruence c;
  c.name = "radial";
  c.tangent = tangent;
  c.momentum = [tangent, m0](const Point& x) { return m0 * tangent(x); };
  c.domain = [base_point, mask](const Point& x) {
    const FourVector d((x - base_point).cwiseProduct(mask));
    return d[0] > 0.0 && norm2(d) > 0.0;
  };
  return c;
}

Congruence Congruence::from_initial_surface(
    double t0, std::function<Eigen::Vector3d(const Eigen::Vector3d&)> velocity, double m0,
    int rk4_steps) {
  if (rk4_steps < 1) throw Error(ErrorKind::InvalidArgument, "rk4_steps must be positive");

  // Free motion dx/dtau = u, du/dtau = 0 from (t0, y) for proper time tau.
  auto flow = [t0, velocity, rk4_steps](const Eigen::Vector4d& z, FourVector& u_end) {
    using State = Eigen::Matrix<double, 8, 1>;  // (x, u)
    auto rhs = [](const State& y) {
      State d;
      d << y.tail<4>(), Eigen::Vector4d::Zero();
      return d;
    };
    State y;
    y << t0, z[0], z[1], z[2], unit_velocity(velocity(z.head<3>())).vec();
    const double h = z[3] / rk4_steps;
    for (int i = 0; i < rk4_steps; ++i) {
      const State k1 = rhs(y);
      const State k2 = rhs(y + 0.5 * h * k1);
      const State k3 = rhs(y + 0.5 * h * k2);
      const State k4 = rhs(y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    u_end = FourVector(Eigen::Vector4d(y.tail<4>()));
    return Point(y.head<4>());
  };

  auto solve = [t0, velocity, flow](const Point& x) {
    if (!(x[0] > t0)) throw Error(ErrorKind::DomainBoundary, "point is not after the initial surface");
    const Eigen::Vector3d xs = x.tail<3>();
    const Eigen::Vector3d v0 = velocity(xs);
    const double gamma0 = unit_velocity(v0)[0];
    Eigen::Vector4d z;
    z.head<3>() = xs - v0 * (x[0] - t0);
    z[3] = (x[0] - t0) / gamma0;
    FourVector u;
    const double target = 1e-14 * std::max(1.0, x.cwiseAbs().maxCoeff());
    for (int iter = 0; iter < 40; ++iter) {
      const Eigen::Vector4d f = flow(z, u) - x;
      if (f.cwiseAbs().maxCoeff() <= target) return u;
      Mat4 j;
      for (int i = 0; i < 4; ++i) {
        const double h = 1e-7 * std::max(1.0, std::abs(z[i]));
        Eigen::Vector4d zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        FourVector dummy;
        j.col(i) = (flow(zp, dummy) - flow(zm, dummy)) / (2.0 * h);
      }
      z -= j.partialPivLu().solve(f);
    }
    const Eigen::Vector4d f = flow(z, u) - x;
    if (f.cwiseAbs().maxCoeff() <= 1e3 * target) return u;
    throw Error(ErrorKind::DomainBoundary, "no congruence curve found through point");
  };

  Congruence c;
  c.name = "initial-surface";
  c.tangent = solve;
  c.momentum = [solve, m0](const Point& x) { return m0 * solve(x); };
  c.domain = [t0](const Point& x) { return x[0] > t0; };
  return c;
}

Congruence Congruence::with_shear(double rate) const {
  Congruence c = *this;
  c.name = name + "+shear";
  const auto base = tangent;
  c.tangent = [base, rate](const Point& x) {
    FourVector u = base(x);
    const double angle = rate * x[1];
    const double cs = std::cos(angle), sn = std::sin(angle);
    const double u1 = u[1], u2 = u[2];
    u[1] = cs * u1 - sn * u2;
    u[2] = sn * u1 + cs * u2;
    return u;
  };
  return c;
}

Congruence Congruence::with_drift(const FourVector& drift) const {
  Congruence c = *this;
  c.name = name + "+drift";
  const auto base = momentum;
  c.momentum = [base, drift](const Point& x) { return base(x) + drift; };
  return c;
}

FourVector lie_derivative(const Congruence& congruence, const Point& x) {
  if (!congruence.contains(x)) {
    throw Error(ErrorKind::DomainBoundary, "point outside congruence '" + congruence.name + "'");
  }
  const FourVector u = congruence.tangent(x);
  const FourVector p = congruence.momentum(x);
  FourVector out;
  for (int b = 0; b < 4; ++b) {
    const double h = step_for(x[b]);
    Point xp = x, xm = x;
    xp[b] += h;
    xm[b] -= h;
    if (!congruence.contains(xp) || !congruence.contains(xm)) {
      throw Error(ErrorKind::DomainBoundary, "difference stencil leaves congruence '" + congruence.name + "'");
    }
    const FourVector dp = (congruence.momentum(xp) - congruence.momentum(xm)) * (1.0 / (2.0 * h));
    const FourVector du = (congruence.tangent(xp) - congruence.tangent(xm)) * (1.0 / (2.0 * h));
    out += u[b] * dp - p[b] * du;
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::BothPass: return "both_pass";
    case Verdict::BothFail: return "both_fail";
    case Verdict::Mixed: return "mixed";
  }
  return "unknown";
}

LieTransportReport lie_transport_check(const GammaRep& rep, const Congruence& congruence,
                                       const HamiltonJacobiField& hj, const WaveFunction& wf,
                                       const Box& region, Rng& rng,
                                       const LieTransportOptions& options) {
  if (options.n_samples < 1) throw Error(ErrorKind::InvalidArgument, "n_samples must be positive");
  std::vector<Point> samples;
  for (int i = 0; i < options.n_samples; ++i) samples.push_back(uniform_point(rng, region));

  LieTransportReport out;
  for (const auto& x : samples) out.lie_residual = std::max(out.lie_residual, lie_derivative(congruence, x).vec().norm());
  out.lie_pass = out.lie_residual <= options.lie_tol;

  struct DiracSide {
    double commutator = 0.0;
    double eigen = 0.0;
  };
  auto dirac_side = [&](const HamiltonJacobiField& field) {
    DiracSide d;
    for (const auto& x : samples) {
      const Covector g = gradient(field, x);
      const FourVector u = congruence.tangent(x);
      const CMat4 sg = slash(rep, g);
      const CMat4 su = slash(rep, u).matrix;
      d.commutator = std::max(d.commutator, frobenius_norm(commutator(sg, su)));
      const Bispinor xi = slash_eigensystem(rep, u).pairs.front().vector;
      const double scale = std::abs(wf.psi_prime(field(x)));
      d.eigen = std::max(d.eigen, scale * (sg * xi - contract(u, g) * xi).norm());
    }
    return d;
  };
  auto passes = [&](const DiracSide& d) {
    return d.commutator <= options.dirac_tol && d.eigen <= options.dirac_tol;
  };

  DiracSide side = dirac_side(hj);
  out.raw_commutator_norm = side.commutator;
  if (!passes(side) && options.extract_parallel) {
    try {
      const PerpDecomposition dec = decompose_parallel_perp(hj, congruence.tangent, samples);
      side = dirac_side(dec.w_par);
      out.used_parallel_part = true;
      out.spin = dec.spin;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IllConditioned) throw;
    }
  }
  out.commutator_norm = side.commutator;
  out.eigen_residual = side.eigen;
  out.dirac_pass = passes(side);
  out.verdict = out.lie_pass == out.dirac_pass ? (out.lie_pass ? Verdict::BothPass : Verdict::BothFail)
                                               : Verdict::Mixed;
  return out;
}

}  // namespace hjdirac
