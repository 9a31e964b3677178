#include "hjdirac/hamilton_jacobi.hpp"

#include "hjdirac/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hjdirac {
namespace {

constexpr std::array<std::array<int, 2>, 6> kPlanes{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

double step_for(double coordinate, double base) { return base * std::max(1.0, std::abs(coordinate)); }

Mat4 covector_jacobian(const CovectorField& omega, const Point& x) {
  // (a, b) = d omega_b / dx^a
  Mat4 j;
  for (int a = 0; a < 4; ++a) {
    const double h = step_for(x[a], 1e-5);
    Point xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    j.row(a) = ((omega(xp).vec() - omega(xm).vec()) / (2.0 * h)).transpose();
  }
  return j;
}

Mat4 second_differences(const ScalarField& w, const Point& x) {
  Mat4 h2;
  const double w0 = w(x);
  for (int a = 0; a < 4; ++a) {
    const double ha = step_for(x[a], 1e-4);
    Point xp = x, xm = x;
    xp[a] += ha;
    xm[a] -= ha;
    h2(a, a) = (w(xp) - 2.0 * w0 + w(xm)) / (ha * ha);
    for (int b = a + 1; b < 4; ++b) {
      const double hb = step_for(x[b], 1e-4);
      Point pp = x, pm = x, mp = x, mm = x;
      pp[a] += ha; pp[b] += hb;
      pm[a] += ha; pm[b] -= hb;
      mp[a] -= ha; mp[b] += hb;
      mm[a] -= ha; mm[b] -= hb;
      h2(a, b) = (w(pp) - w(pm) - w(mp) + w(mm)) / (4.0 * ha * hb);
      h2(b, a) = h2(a, b);
    }
  }
  return h2;
}

using JacobianFn = std::function<Mat4(const Point&)>;

HJReport exactness(const CovectorField& omega, const JacobianFn& jacobian, const Box& region,
                   Rng& rng, const ExactnessOptions& options) {
  if (options.n_loops < 1 || options.segments < 4 || options.n_points < 0) {
    throw Error(ErrorKind::InvalidArgument, "exactness check needs n_loops >= 1 and segments >= 4");
  }
  HJReport report;
  report.closedness_tol = options.closedness_tol;
  report.loop_tol = options.loop_tol;

  for (int i = 0; i < options.n_points; ++i) {
    const Mat4 j = jacobian(uniform_point(rng, region));
    const double asym = (j - j.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
    report.closedness_residual = std::max(report.closedness_residual, asym / scale);
  }

  const Point extent = region.extent();
  for (int i = 0; i < options.n_loops; ++i) {
    LoopRecord loop;
    loop.axis_a = kPlanes[static_cast<std::size_t>(i % 6)][0];
    loop.axis_b = kPlanes[static_cast<std::size_t>(i % 6)][1];
    loop.side_a = extent[loop.axis_a] * rng.uniform(0.2, 0.8);
    loop.side_b = extent[loop.axis_b] * rng.uniform(0.2, 0.8);
    for (int c = 0; c < 4; ++c) {
      double span = extent[c];
      if (c == loop.axis_a) span -= loop.side_a;
      if (c == loop.axis_b) span -= loop.side_b;
      loop.corner[c] = region.lo[c] + rng.uniform() * span;
    }
    loop.integral = loop_integral(omega, loop.axis_a, loop.axis_b, loop.corner, loop.side_a,
                                  loop.side_b, options.segments);

    // Scale: perimeter times the mean tangential magnitude at the corners and midpoints.
    double mean = 0.0;
    int count = 0;
    for (double fa : {0.0, 0.5, 1.0}) {
      for (double fb : {0.0, 0.5, 1.0}) {
        if (fa == 0.5 && fb == 0.5) continue;
        Point p = loop.corner;
        p[loop.axis_a] += fa * loop.side_a;
        p[loop.axis_b] += fb * loop.side_b;
        const Covector w = omega(p);
        mean += std::hypot(w[loop.axis_a], w[loop.axis_b]);
        ++count;
      }
    }
    mean /= count;
    loop.scale = std::max(1.0, 2.0 * (loop.side_a + loop.side_b) * mean);

    report.max_loop_integral = std::max(report.max_loop_integral, std::abs(loop.integral));
    report.max_loop_ratio = std::max(report.max_loop_ratio, std::abs(loop.integral) / loop.scale);
    report.loops.push_back(loop);
  }
  report.pass = report.closedness_residual <= options.closedness_tol &&
                report.max_loop_ratio <= options.loop_tol;
  return report;
}

JacobianFn closedness_jacobian(const HamiltonJacobiField& field) {
  if (field.mode() == GradientMode::Analytic) {
    auto grad = field.analytic_gradient;
    return [grad](const Point& x) { return covector_jacobian(grad, x); };
  }
  // A bare scalar: the mixed-partial stencil of W itself.
  auto value = field.value;
  return [value](const Point& x) { return second_differences(value, x); };
}

CovectorField gradient_of(const HamiltonJacobiField& field) {
  return [field](const Point& x) { return gradient(field, x); };
}

}  // namespace

Covector gradient(const HamiltonJacobiField& field, const Point& x) {
  if (!field.contains(x)) {
    throw Error(ErrorKind::DomainBoundary, "point outside the domain of field '" + field.name + "'");
  }
  if (field.analytic_gradient) return field.analytic_gradient(x);
  Covector g;
  for (int a = 0; a < 4; ++a) {
    const double h = step_for(x[a], 1e-6);
    Point xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    g[a] = (field.value(xp) - field.value(xm)) / (2.0 * h);
  }
  return g;
}

double hamiltonian(const HamiltonJacobiField& field, const Point& x) { return -gradient(field, x)[0]; }

Mat4 hessian(const HamiltonJacobiField& field, const Point& x) {
  if (!field.contains(x)) {
    throw Error(ErrorKind::DomainBoundary, "point outside the domain of field '" + field.name + "'");
  }
  if (field.analytic_hessian) return field.analytic_hessian(x);
  if (field.analytic_gradient) {
    const Mat4 j = covector_jacobian(field.analytic_gradient, x);
    return 0.5 * (j + j.transpose());
  }
  return second_differences(field.value, x);
}

HamiltonJacobiField constant_field(double c) {
  HamiltonJacobiField f;
  f.name = "constant";
  f.value = [c](const Point&) { return c; };
  f.analytic_gradient = [](const Point&) { return Covector(); };
  f.analytic_hessian = [](const Point&) { return Mat4::Zero().eval(); };
  return f;
}

HamiltonJacobiField plane_wave_field(const Eigen::Vector3d& p, double m0) {
  const double energy = std::sqrt(p.squaredNorm() + m0 * m0);
  const Covector k(-energy, p[0], p[1], p[2]);
  HamiltonJacobiField f;
  f.name = "plane-wave";
  f.m0 = m0;
  f.value = [k](const Point& x) { return k.vec().dot(x); };
  f.analytic_gradient = [k](const Point&) { return k; };
  f.analytic_hessian = [](const Point&) { return Mat4::Zero().eval(); };
  return f;
}

HamiltonJacobiField polynomial_field(const Polynomial4& w, double m0) {
  HamiltonJacobiField f;
  f.name = "custom-polynomial";
  f.m0 = m0;
  f.value = [w](const Point& x) { return w(x); };
  f.analytic_gradient = [w](const Point& x) { return Covector(w.gradient(x)); };
  f.analytic_hessian = [w](const Point& x) { return w.hessian(x); };
  return f;
}

double loop_integral(const CovectorField& omega, int axis_a, int axis_b, const Point& corner,
                     double side_a, double side_b, int segments) {
  const int n = std::max(1, segments / 4);
  // Counterclockwise: +a, +b, -a, -b.
  const std::array<std::pair<int, double>, 4> legs{
      {{axis_a, side_a}, {axis_b, side_b}, {axis_a, -side_a}, {axis_b, -side_b}}};
  double total = 0.0;
  Point start = corner;
  for (const auto& [axis, length] : legs) {
    const double h = length / n;
    double sum = 0.5 * omega(start)[axis];
    for (int k = 1; k < n; ++k) {
      Point p = start;
      p[axis] += k * h;
      sum += omega(p)[axis];
    }
    Point end = start;
    end[axis] += length;
    sum += 0.5 * omega(end)[axis];
    total += sum * h;
    start = end;
  }
  return total;
}

HJReport is_exact_form(const CovectorField& omega, const Box& region, Rng& rng,
                       const ExactnessOptions& options) {
  return exactness(omega, [omega](const Point& x) { return covector_jacobian(omega, x); }, region,
                   rng, options);
}

HJReport is_exact(const HamiltonJacobiField& field, const Box& region, Rng& rng,
                  const ExactnessOptions& options) {
  return exactness(gradient_of(field), closedness_jacobian(field), region, rng, options);
}

double mass_shell_check(const HamiltonJacobiField& field, const std::vector<Point>& points) {
  double worst = 0.0;
  for (const auto& x : points) {
    const Covector g = gradient(field, x);
    const double h = -g[0];
    const double p2 = g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
    worst = std::max(worst, std::abs(h * h - p2 - field.m0 * field.m0));
  }
  return worst;
}

ScaleReport scale_check(const HamiltonJacobiField& field, const ScaleFunction& psi,
                        const Box& region, Rng& rng, const ExactnessOptions& options) {
  ScaleReport out;
  const auto grad = gradient_of(field);
  const auto value = field.value;
  const auto psi_prime = psi.psi_prime;
  const CovectorField scaled = [grad, value, psi_prime](const Point& x) {
    return psi_prime(value(x)) * grad(x);
  };
  JacobianFn scaled_jacobian;
  if (field.mode() == GradientMode::Analytic) {
    scaled_jacobian = [scaled](const Point& x) { return covector_jacobian(scaled, x); };
  } else {
    const auto f = psi.psi;
    scaled_jacobian = [f, value](const Point& x) {
      return second_differences([&](const Point& y) { return f(value(y)); }, x);
    };
  }
  out.forward = exactness(scaled, scaled_jacobian, region, rng, options);

  // Range of W on the region, then a sign scan of psi' across it.
  std::vector<Point> samples;
  double wmin = std::numeric_limits<double>::infinity();
  double wmax = -wmin;
  for (int i = 0; i < 256; ++i) {
    samples.push_back(uniform_point(rng, region));
    const double w = value(samples.back());
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
  }
  const double pad = 0.05 * std::max(1.0, wmax - wmin);
  int sign = 0;
  for (int i = 0; i <= 256 && out.monotone; ++i) {
    const double d = psi_prime(wmin - pad + (wmax - wmin + 2.0 * pad) * i / 256.0);
    const int si = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (si == 0 || (sign != 0 && si != sign)) out.monotone = false;
    sign = si;
  }
  if (!out.monotone) {
    out.pass = out.forward.pass;
    return out;
  }

  const auto f = psi.psi;
  const double lo0 = wmin - pad, hi0 = wmax + pad;
  auto inverse = [f, sign, lo0, hi0](double target) {
    double lo = lo0, hi = hi0;
    auto g = [&](double w) { return sign * (f(w) - target); };
    for (int i = 0; i < 64 && g(lo) > 0.0; ++i) lo -= (hi0 - lo0) * std::ldexp(1.0, i);
    for (int i = 0; i < 64 && g(hi) < 0.0; ++i) hi += (hi0 - lo0) * std::ldexp(1.0, i);
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  for (const auto& x : samples) {
    const double w = value(x);
    out.inverse_recovery = std::max(out.inverse_recovery, std::abs(inverse(f(w)) - w));
  }
  const CovectorField recovered = [scaled, value, f, psi_prime, inverse](const Point& x) {
    const double w = inverse(f(value(x)));
    return (1.0 / psi_prime(w)) * scaled(x);
  };
  out.inverse = is_exact_form(recovered, region, rng, options);
  out.pass = out.forward.pass && out.inverse->pass;
  return out;
}

HamiltonJacobiField construct_geodesic_W(double m0, const Point& base_point,
                                         const GeodesicOptions& options) {
  if (!(m0 >= 0.0) || !std::isfinite(m0)) {
    throw Error(ErrorKind::InvalidArgument, "rest mass must be finite and non-negative");
  }
  const double k = options.k;
  const Eigen::Vector4d mask(1.0, options.spatial_axes[0] ? 1.0 : 0.0,
                             options.spatial_axes[1] ? 1.0 : 0.0,
                             options.spatial_axes[2] ? 1.0 : 0.0);
  // Lowered, masked displacement l_a = (dt, -dx^i) and the interval s.
  auto interval = [base_point, mask](const Point& X, Eigen::Vector4d& l) {
    const Eigen::Vector4d d = (X - base_point).cwiseProduct(mask);
    l = Eigen::Vector4d(d[0], -d[1], -d[2], -d[3]);
    const double s2 = d[0] * d[0] - d[1] * d[1] - d[2] * d[2] - d[3] * d[3];
    if (!(d[0] > 0.0) || !(s2 > 0.0)) {
      throw Error(ErrorKind::NonTimelikeSeparation,
                  "point is not future-timelike separated from the base point");
    }
    return std::sqrt(s2);
  };

  HamiltonJacobiField f;
  f.name = "geodesic";
  f.m0 = m0;
  if (!options.chart) {
    f.value = [=](const Point& x) {
      Eigen::Vector4d l;
      return m0 * interval(x, l) + k;
    };
    f.analytic_gradient = [=](const Point& x) {
      Eigen::Vector4d l;
      const double s = interval(x, l);
      return Covector(m0 * l / s);
    };
    f.analytic_hessian = [=](const Point& x) {
      Eigen::Vector4d l;
      const double s = interval(x, l);
      Mat4 eta_masked = Eigen::Vector4d(mask[0], -mask[1], -mask[2], -mask[3]).asDiagonal();
      return Mat4(m0 * (eta_masked / s - l * l.transpose() / (s * s * s)));
    };
    return f;
  }

  const CoordinateChart chart = *options.chart;
  f.name = "geodesic-" + chart.name;
  f.domain = chart.domain;
  f.value = [=](const Point& x) {
    Eigen::Vector4d l;
    return m0 * interval(chart.to_cartesian(x), l) + k;
  };
  f.analytic_gradient = [=](const Point& x) {
    Eigen::Vector4d l;
    const double s = interval(chart.to_cartesian(x), l);
    // dW/dx^mu = dW/dX^a dX^a/dx^mu
    return Covector(chart.jacobian(x).transpose() * (m0 * l / s));
  };
  return f;
}

ProjectileField::ProjectileField(double m0, double ux, double uy, double g, const Point& origin,
                                 double w0)
    : m0_(m0), ux_(ux), uy_(uy), g_(g), origin_(origin), w0_(w0) {
  if (!(m0 > 0.0) || !std::isfinite(m0) || !std::isfinite(ux) || !std::isfinite(uy) ||
      !std::isfinite(g) || !origin.allFinite() || !std::isfinite(w0)) {
    throw Error(ErrorKind::InvalidArgument, "projectile needs finite parameters and m0 > 0");
  }
}

double ProjectileField::tdot(double s) const {
  const double vy = uy_ - g_ * s;
  return std::sqrt(1.0 + ux_ * ux_ + vy * vy);
}

Point ProjectileField::position(double s) const {
  const double a2 = 1.0 + ux_ * ux_;
  const double a = std::sqrt(a2);
  // F' (w) = sqrt(a^2 + w^2), so t(s) = t0 + (F(u_y) - F(u_y - g s)) / g.
  auto primitive = [a, a2](double w) {
    return 0.5 * (w * std::sqrt(a2 + w * w) + a2 * std::asinh(w / a));
  };
  const double t = g_ == 0.0 ? s * tdot(0.0)
                             : (primitive(uy_) - primitive(uy_ - g_ * s)) / g_;
  return Point(origin_[0] + t, origin_[1] + ux_ * s, origin_[2] + uy_ * s - 0.5 * g_ * s * s,
               origin_[3]);
}

FourVector ProjectileField::velocity(double s) const {
  return FourVector(tdot(s), ux_, uy_ - g_ * s, 0.0);
}

Covector ProjectileField::momentum(double s) const {
  return Covector(-m0_ * tdot(s), m0_ * ux_, m0_ * (uy_ - g_ * s), 0.0);
}

HamiltonJacobiField ProjectileField::at(double s) const {
  const Covector k = momentum(s);
  const double w0 = w0_;
  HamiltonJacobiField f;
  f.name = "projectile";
  f.m0 = m0_;
  f.value = [k, w0](const Point& x) { return k.vec().dot(x) + w0; };
  f.analytic_gradient = [k](const Point&) { return k; };
  f.analytic_hessian = [](const Point&) { return Mat4::Zero().eval(); };
  return f;
}

ProjectileField projectile_field(double m0, double ux, double uy, double g, const Point& origin,
                                 double w0) {
  return ProjectileField(m0, ux, uy, g, origin, w0);
}

PerpDecomposition decompose_parallel_perp(const HamiltonJacobiField& field,
                                          const TangentField& tangent,
                                          const std::vector<Point>& samples) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "no sample points");
  Mat4 normal = Mat4::Zero();
  Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
  std::vector<Mat4> projectors;
  std::vector<Eigen::Vector4d> grads;
  for (const auto& x : samples) {
    Eigen::Vector4d u = lower(tangent(x)).vec();
    const double n = u.norm();
    if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "tangent field vanishes at a sample");
    u /= n;
    const Mat4 p = Mat4::Identity() - u * u.transpose();
    const Eigen::Vector4d g = gradient(field, x).vec();
    normal += p;
    rhs += p * g;
    projectors.push_back(p);
    grads.push_back(g);
  }
  Eigen::SelfAdjointEigenSolver<Mat4> es(normal);
  const auto& ev = es.eigenvalues();
  if (!(ev[0] > 1e-12 * ev[3])) {
    throw Error(ErrorKind::IllConditioned, "tangent directions do not determine the spin constants");
  }
  const Eigen::Vector4d c = es.eigenvectors() *
                            (es.eigenvalues().cwiseInverse().asDiagonal() *
                             (es.eigenvectors().transpose() * rhs));

  PerpDecomposition out;
  out.spin = Covector(c);
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sum += (projectors[i] * (grads[i] - c)).squaredNorm();
  out.residual = std::sqrt(sum / static_cast<double>(samples.size()));

  HamiltonJacobiField par;
  par.name = field.name + "-parallel";
  par.m0 = field.m0;
  par.domain = field.domain;
  const auto value = field.value;
  par.value = [value, c](const Point& x) { return value(x) - c.dot(x); };
  if (field.analytic_gradient) {
    const auto grad = field.analytic_gradient;
    par.analytic_gradient = [grad, c](const Point& x) { return Covector(grad(x).vec() - c); };
  }
  if (field.analytic_hessian) par.analytic_hessian = field.analytic_hessian;
  out.w_par = par;
  return out;
}

}  // namespace hjdirac
