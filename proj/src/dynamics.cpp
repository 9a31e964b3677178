#include "hjdirac/dynamics.hpp"

#include "hjdirac/error.hpp"

#include <algorithm>
#include <cmath>

namespace hjdirac {
namespace {

using State = Eigen::Matrix<double, 8, 1>;

State pack(const FourVector& x, const FourVector& p) {
  State y;
  y << x.vec(), p.vec();
  return y;
}

PhaseState unpack(const State& y, double s) {
  return {FourVector(Eigen::Vector4d(y.head<4>())), FourVector(Eigen::Vector4d(y.tail<4>())), s};
}

double spatial_norm2(const FourVector& p) { return p[1] * p[1] + p[2] * p[2] + p[3] * p[3]; }

Eigen::Vector4d eta_times(const Eigen::Vector4d& v) { return Eigen::Vector4d(v[0], -v[1], -v[2], -v[3]); }

Eigen::Vector4d difference_partial(const HamiltonianModel& model, const FourVector& x,
                                   const FourVector& p, double s, bool wrt_p) {
  Eigen::Vector4d d;
  for (int a = 0; a < 4; ++a) {
    FourVector xp = x, xm = x, pp = p, pm = p;
    const double base = wrt_p ? p[a] : x[a];
    const double h = 1e-6 * std::max(1.0, std::abs(base));
    if (wrt_p) {
      pp[a] += h;
      pm[a] -= h;
    } else {
      xp[a] += h;
      xm[a] -= h;
    }
    d[a] = (model.H(xp, pp, s) - model.H(xm, pm, s)) / (2.0 * h);
  }
  return d;
}

std::size_t step_count(double span, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  if (!(span > 0.0) || !std::isfinite(span)) throw Error(ErrorKind::InvalidArgument, "s_end must exceed the initial s");
  const double n = std::ceil(span / step - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, n));
}

void fill_diagnostics(const HamiltonianModel& model, Trajectory& traj) {
  static const GammaRep rep = build_gamma_rep();
  const std::size_t n = traj.samples.size();
  traj.H.resize(n);
  traj.pdot.resize(n);
  traj.dm_ds.resize(n);
  traj.comm_norm.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PhaseState& st = traj.samples[i];
    traj.H[i] = model.H(st.x, st.p, st.s);
    traj.pdot[i] = hamilton_rhs(model, st).dp;
    traj.dm_ds[i] = std::sqrt(std::abs(norm2(traj.pdot[i])));
    traj.comm_norm[i] = operator_commutator(rep, st.p, traj.pdot[i]);
    traj.energy_drift = std::max(traj.energy_drift, std::abs(traj.H[i] - traj.H[0]));
  }
}

bool finite(const State& y) { return y.allFinite(); }

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Free: return "free";
    case ModelKind::Projectile: return "projectile";
    case ModelKind::ProjectileArclength: return "projectile-arclength";
    case ModelKind::Quadratic: return "quadratic";
    case ModelKind::Harmonic: return "harmonic";
    case ModelKind::Dilation: return "dilation";
    case ModelKind::Custom: return "custom";
  }
  return "unknown";
}

const char* to_string(Integrator method) {
  return method == Integrator::RK4 ? "rk4" : "leapfrog";
}

HamiltonianModel HamiltonianModel::free(double m0) {
  HamiltonianModel m;
  m.name = "free";
  m.kind = ModelKind::Free;
  m.m0 = m0;
  m.separable = true;
  m.H = [m0](const FourVector&, const FourVector& p, double) {
    return std::sqrt(m0 * m0 + spatial_norm2(p));
  };
  m.dH_dx = [](const FourVector&, const FourVector&, double) { return Eigen::Vector4d::Zero().eval(); };
  m.dH_dp = [m0](const FourVector&, const FourVector& p, double) {
    const double e = std::sqrt(m0 * m0 + spatial_norm2(p));
    return Eigen::Vector4d(0.0, p[1] / e, p[2] / e, p[3] / e);
  };
  return m;
}

HamiltonianModel HamiltonianModel::projectile(double m0, double g) {
  HamiltonianModel m = free(m0);
  m.name = "projectile";
  m.kind = ModelKind::Projectile;
  m.H = [m0, g](const FourVector& x, const FourVector& p, double) {
    return std::sqrt(m0 * m0 + spatial_norm2(p)) + m0 * g * x[2];
  };
  m.dH_dx = [m0, g](const FourVector&, const FourVector&, double) {
    return Eigen::Vector4d(0.0, 0.0, m0 * g, 0.0);
  };
  return m;
}

HamiltonianModel HamiltonianModel::projectile_arclength(double m0, double g) {
  if (!(m0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "arclength projectile needs m0 > 0");
  HamiltonianModel m;
  m.name = "projectile-arclength";
  m.kind = ModelKind::ProjectileArclength;
  m.m0 = m0;
  m.separable = true;
  m.H = [m0, g](const FourVector& x, const FourVector& p, double) {
    return norm2(p) / (2.0 * m0) - m0 * g * x[2];
  };
  m.dH_dx = [m0, g](const FourVector&, const FourVector&, double) {
    return Eigen::Vector4d(0.0, 0.0, -m0 * g, 0.0);
  };
  m.dH_dp = [m0](const FourVector&, const FourVector& p, double) { return Eigen::Vector4d(eta_times(p.vec()) / m0); };
  return m;
}

HamiltonianModel HamiltonianModel::quadratic() {
  HamiltonianModel m;
  m.name = "quadratic";
  m.kind = ModelKind::Quadratic;
  m.separable = true;
  m.H = [](const FourVector&, const FourVector& p, double) { return 0.5 * norm2(p); };
  m.dH_dx = [](const FourVector&, const FourVector&, double) { return Eigen::Vector4d::Zero().eval(); };
  m.dH_dp = [](const FourVector&, const FourVector& p, double) { return eta_times(p.vec()); };
  return m;
}

HamiltonianModel HamiltonianModel::harmonic() {
  HamiltonianModel m;
  m.name = "harmonic";
  m.kind = ModelKind::Harmonic;
  m.separable = true;
  m.H = [](const FourVector& x, const FourVector& p, double) { return 0.5 * (p[1] * p[1] + x[1] * x[1]); };
  m.dH_dx = [](const FourVector& x, const FourVector&, double) { return Eigen::Vector4d(0.0, x[1], 0.0, 0.0); };
  m.dH_dp = [](const FourVector&, const FourVector& p, double) { return Eigen::Vector4d(0.0, p[1], 0.0, 0.0); };
  return m;
}

HamiltonianModel HamiltonianModel::dilation(double rate) {
  HamiltonianModel m;
  m.name = "dilation";
  m.kind = ModelKind::Dilation;
  m.H = [rate](const FourVector& x, const FourVector& p, double) { return -rate * dot(x, p); };
  m.dH_dx = [rate](const FourVector&, const FourVector& p, double) { return Eigen::Vector4d(-rate * eta_times(p.vec())); };
  m.dH_dp = [rate](const FourVector& x, const FourVector&, double) { return Eigen::Vector4d(-rate * eta_times(x.vec())); };
  return m;
}

PhaseDerivative hamilton_rhs(const HamiltonianModel& model, const PhaseState& state) {
  const Eigen::Vector4d hx = model.dH_dx ? model.dH_dx(state.x, state.p, state.s)
                                         : difference_partial(model, state.x, state.p, state.s, false);
  const Eigen::Vector4d hp = model.dH_dp ? model.dH_dp(state.x, state.p, state.s)
                                         : difference_partial(model, state.x, state.p, state.s, true);
  if (!hx.allFinite() || !hp.allFinite()) {
    throw Error(ErrorKind::PartialEvaluationFailure, "partials of '" + model.name + "' are not finite");
  }
  return {FourVector(eta_times(hp)), FourVector(Eigen::Vector4d(-eta_times(hx)))};
}

Trajectory integrate(const HamiltonianModel& model, const PhaseState& initial, double s_end,
                     double step, Integrator method) {
  if (method == Integrator::Leapfrog && !model.separable) {
    throw Error(ErrorKind::NonSeparable, "leapfrog needs a separable Hamiltonian, got '" + model.name + "'");
  }
  const double span = s_end - initial.s;
  const std::size_t n = step_count(span, step);

  Trajectory traj;
  traj.samples.reserve(n + 1);
  traj.samples.push_back(initial);
  State y = pack(initial.x, initial.p);
  auto rhs = [&](const State& z, double s) {
    const PhaseDerivative d = hamilton_rhs(model, unpack(z, s));
    return pack(d.dx, d.dp);
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double s = initial.s + static_cast<double>(i) * step;
    const double s_next = i + 1 == n ? s_end : s + step;
    const double h = s_next - s;
    if (method == Integrator::RK4) {
      const State k1 = rhs(y, s);
      const State k2 = rhs(y + 0.5 * h * k1, s + 0.5 * h);
      const State k3 = rhs(y + 0.5 * h * k2, s + 0.5 * h);
      const State k4 = rhs(y + h * k3, s + h);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      // kick, drift, kick
      y.tail<4>() += 0.5 * h * rhs(y, s).tail<4>();
      y.head<4>() += h * rhs(y, s + 0.5 * h).head<4>();
      y.tail<4>() += 0.5 * h * rhs(y, s_next).tail<4>();
    }
    if (!finite(y)) {
      throw Error(ErrorKind::StepRejected, "state became non-finite at s = " + std::to_string(s_next));
    }
    traj.samples.push_back(unpack(y, s_next));
  }
  fill_diagnostics(model, traj);
  return traj;
}

PhaseState projectile_launch(const HamiltonianModel& model, double ux, double uy, const Point& origin) {
  const double tdot = std::sqrt(1.0 + ux * ux + uy * uy);
  const double m0 = model.m0;
  PhaseState st;
  st.x = FourVector(origin);
  if (model.kind == ModelKind::Projectile) {
    st.p = FourVector(m0 * tdot, -m0 * ux, -m0 * uy, 0.0);
  } else {
    st.p = FourVector(m0 * tdot, m0 * ux, m0 * uy, 0.0);
  }
  return st;
}

PhaseState projectile_exact(double m0, double g, const PhaseState& initial, double s) {
  const FourVector& p0 = initial.p;
  const double ds = s - initial.s;
  PhaseState out = initial;
  out.s = s;
  const double c2 = m0 * m0 + p0[1] * p0[1] + p0[3] * p0[3];
  const double e0 = std::sqrt(c2 + p0[2] * p0[2]);
  if (g == 0.0) {
    for (int i = 1; i < 4; ++i) out.x[i] = initial.x[i] - p0[i] * ds / e0;
    return out;
  }
  const double c = std::sqrt(c2);
  const double big_p = p0[2] + m0 * g * ds;
  const double e = std::sqrt(c2 + big_p * big_p);
  const double arc = std::asinh(big_p / c) - std::asinh(p0[2] / c);
  out.p[2] = big_p;
  out.x[1] = initial.x[1] - p0[1] / (m0 * g) * arc;
  out.x[2] = initial.x[2] - (e - e0) / (m0 * g);
  out.x[3] = initial.x[3] - p0[3] / (m0 * g) * arc;
  return out;
}

CovariantTrajectory covariant_integrate(const MetricField& metric, const CoordinateChart& chart,
                                        const CovariantModel& model, const PhaseState& initial,
                                        double s_end, double step) {
  if (!(model.m0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "covariant run needs m0 > 0");
  const double span = s_end - initial.s;
  const std::size_t n = step_count(span, step);
  const double m0 = model.m0;

  auto potential_gradient = [&model](const Point& x) -> Eigen::Vector4d {
    if (model.dV) return model.dV(x);
    if (!model.V) return Eigen::Vector4d::Zero();
    Eigen::Vector4d d;
    for (int a = 0; a < 4; ++a) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[a]));
      Point xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      d[a] = (model.V(xp) - model.V(xm)) / (2.0 * h);
    }
    return d;
  };
  auto force = [&](const Point& x) -> Eigen::Vector4d {
    // -g^{mu nu} d_nu V
    const Mat4 g = metric(x);
    return -g.inverse() * potential_gradient(x);
  };
  auto rhs = [&](const State& y) {
    const Point x = y.head<4>();
    if (!chart.contains(x)) {
      throw Error(ErrorKind::ChartBoundary, "trajectory left the domain of chart '" + chart.name + "'");
    }
    const Eigen::Vector4d p = y.tail<4>();
    const ChristoffelField gamma = christoffel_at(metric, x);
    Eigen::Vector4d dp = force(x);
    for (int mu = 0; mu < 4; ++mu) {
      double acc = 0.0;
      for (int nu = 0; nu < 4; ++nu) {
        for (int la = 0; la < 4; ++la) acc += gamma(mu, nu, la) * p[nu] * p[la];
      }
      dp[mu] -= acc / m0;
    }
    State d;
    d << p / m0, dp;
    return d;
  };

  CovariantTrajectory out;
  Trajectory& traj = out.chart;
  traj.samples.push_back(initial);
  State y = pack(initial.x, initial.p);
  rhs(y);  // domain and metric checks at the start point
  for (std::size_t i = 0; i < n; ++i) {
    const double s = initial.s + static_cast<double>(i) * step;
    const double s_next = i + 1 == n ? s_end : s + step;
    const double h = s_next - s;
    const State k1 = rhs(y);
    const State k2 = rhs(y + 0.5 * h * k1);
    const State k3 = rhs(y + 0.5 * h * k2);
    const State k4 = rhs(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite(y)) throw Error(ErrorKind::StepRejected, "state became non-finite");
    if (!chart.contains(y.head<4>())) {
      throw Error(ErrorKind::ChartBoundary, "trajectory left the domain of chart '" + chart.name + "'");
    }
    traj.samples.push_back(unpack(y, s_next));
  }

  static const GammaRep rep = build_gamma_rep();
  const std::size_t count = traj.samples.size();
  traj.H.resize(count);
  traj.pdot.resize(count);
  traj.dm_ds.resize(count);
  traj.comm_norm.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const PhaseState& st = traj.samples[i];
    const Point x = st.x.vec();
    const Mat4 g = metric(x);
    const TetradFrame frame = tetrad_at(metric, x);
    const double v = model.V ? model.V(x) : 0.0;
    const double k = st.p.vec().dot(g * st.p.vec()) / (2.0 * m0) + v;
    out.K.push_back(k);
    out.K_drift = std::max(out.K_drift, std::abs(k - out.K.front()));
    traj.H[i] = k;
    const FourVector f = frame.to_tetrad(g, force(x));
    const FourVector p = frame.to_tetrad(g, st.p.vec());
    traj.pdot[i] = f;
    traj.dm_ds[i] = std::sqrt(std::abs(norm2(f)));
    traj.comm_norm[i] = operator_commutator(rep, p, f);
    out.cartesian.push_back(chart.to_cartesian(x));
  }
  traj.energy_drift = out.K_drift;
  return out;
}

double operator_commutator(const GammaRep& rep, const FourVector& p, const FourVector& pdot,
                           Complex psiW_prime, Complex psiH_prime) {
  const CMat4 c = commutator(slash(rep, p).matrix, slash(rep, pdot).matrix);
  return std::abs(psiW_prime * psiH_prime) * frobenius_norm(c);
}

double normalized_commutator(const GammaRep& rep, const FourVector& p, const FourVector& pdot) {
  const CMat4 a = slash(rep, p).matrix;
  const CMat4 b = slash(rep, pdot).matrix;
  const double na = frobenius_norm(a), nb = frobenius_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return frobenius_norm(commutator(a, b)) / (na * nb);
}

ForceDiagnostic force_diagnostic(const FourVector& f, double tol_null) {
  const double n2 = norm2(f);
  return {f, std::sqrt(std::abs(n2)), classify_norm2(n2, tol_null)};
}

ForceDiagnostic force_diagnostic(const Trajectory& trajectory, std::size_t index, double tol_null) {
  const auto& s = trajectory.samples;
  if (index == 0 || index + 1 >= s.size()) {
    throw Error(ErrorKind::BoundaryIndex, "force needs an interior sample index");
  }
  // Three-point derivative on a possibly uneven grid.
  const double h1 = s[index].s - s[index - 1].s;
  const double h2 = s[index + 1].s - s[index].s;
  const Eigen::Vector4d f = (-h2 / (h1 * (h1 + h2))) * s[index - 1].p.vec() +
                            ((h2 - h1) / (h1 * h2)) * s[index].p.vec() +
                            (h1 / (h2 * (h1 + h2))) * s[index + 1].p.vec();
  return force_diagnostic(FourVector(f), tol_null);
}

HessianCheck hessian_det_check(const HamiltonJacobiField& hj, const Point& x) {
  const Eigen::Matrix3d h = hessian(hj, x).block<3, 3>(1, 1);
  HessianCheck out;
  out.scale = h.cwiseAbs().maxCoeff();
  out.det = h.determinant();
  out.ok = out.scale > 0.0 && std::abs(out.det) > 1e-10 * out.scale * out.scale * out.scale;
  return out;
}

}  // namespace hjdirac
