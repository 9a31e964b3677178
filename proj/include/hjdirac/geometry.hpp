#pragma once

#include "hjdirac/clifford.hpp"
#include "hjdirac/polynomial.hpp"
#include "hjdirac/types.hpp"

#include <array>
#include <functional>
#include <string>

namespace hjdirac {

using MetricDerivatives = std::array<Mat4, 4>;  // [lambda] = dg_{mu nu}/dx^lambda

struct MetricField {
  std::string name;
  std::function<Mat4(const Point&)> g;
  std::function<MetricDerivatives(const Point&)> dg;  // empty: central differences

  Mat4 operator()(const Point& x) const { return g(x); }
  bool has_analytic_derivatives() const { return static_cast<bool>(dg); }

  static MetricField minkowski();
  static MetricField diagonal(const Eigen::Vector4d& diag);
  // Flat space in cylindrical coordinates (t, r, theta, z): diag(1, -1, -r^2, -1).
  static MetricField polar();
  // Components g_{mu nu} = polys[mu][nu]; only mu <= nu is read.
  static MetricField polynomial(const std::array<std::array<Polynomial4, 4>, 4>& polys);
};

// h = 1e-5 * max(1, |x^lambda|), central differences.
MetricDerivatives metric_derivatives_fd(const MetricField& metric, const Point& x);
MetricDerivatives metric_derivatives(const MetricField& metric, const Point& x);

// True iff the eigenvalue sign pattern of the symmetric matrix g is (+,-,-,-).
bool has_lorentzian_signature(const Mat4& g);

// Orthonormal frame: row a holds e_a^mu, so e g e^T = eta.
struct TetradFrame {
  Mat4 e = Mat4::Identity();

  // max |g_{mu nu} e_a^mu e_b^nu - eta_ab|
  double residual(const Mat4& g) const;
  // v^a = eta^ab g_{mu nu} e_b^mu v^nu
  FourVector to_tetrad(const Mat4& g, const Eigen::Vector4d& coordinate_vector) const;
};

// Signature-aware Gram-Schmidt on the coordinate basis, timelike leg first.
TetradFrame tetrad_at(const MetricField& metric, const Point& x);

class ChristoffelField {
 public:
  double operator()(int mu, int nu, int lambda) const { return data_[index(mu, nu, lambda)]; }
  double& at(int mu, int nu, int lambda) { return data_[index(mu, nu, lambda)]; }
  double max_abs() const;

 private:
  static std::size_t index(int mu, int nu, int lambda) {
    return static_cast<std::size_t>(mu * 16 + nu * 4 + lambda);
  }
  std::array<double, 64> data_{};
};

// Gamma^mu_{nu lambda} = 1/2 g^{mu sigma}(d_nu g_{sigma lambda} + d_lambda g_{sigma nu}
//                                        - d_sigma g_{nu lambda}).
// Analytic partials are used when the metric supplies them.
ChristoffelField christoffel_at(const MetricField& metric, const Point& x);
ChristoffelField christoffel_from(const Mat4& g, const MetricDerivatives& dg);

// max |nabla_lambda g_{mu nu}| using the given partials.
double metric_compatibility_residual(const Mat4& g, const MetricDerivatives& dg,
                                     const ChristoffelField& christoffel);

// Closed-form chart x^mu <-> reference Cartesian (tetrad) coordinates X^a.
struct CoordinateChart {
  std::string name;
  std::function<Point(const Point&)> to_cartesian;
  std::function<Point(const Point&)> from_cartesian;
  std::function<Mat4(const Point&)> jacobian;  // (a, mu) = dX^a/dx^mu
  std::function<bool(const Point&)> domain;    // empty: whole R^4

  bool contains(const Point& x) const { return !domain || domain(x); }
  // (mu, a) = dx^mu/dX^a; throws SingularJacobian.
  Mat4 inverse_jacobian(const Point& x) const;
  // g_{mu nu} = J^a_mu J^b_nu eta_ab, finite-difference partials.
  MetricField induced_metric() const;

  static CoordinateChart identity();
  // (t, r, theta, z) -> (t, r cos theta, r sin theta, z), r > 0.
  static CoordinateChart polar();
  // x^0 = factor * X^0, spatial coordinates unchanged.
  static CoordinateChart rescaled_time(double factor);
};

// gamma~^mu = (dx^mu/dX^a) gamma^a
std::array<CMat4, 4> covariant_gamma(const CoordinateChart& chart, const GammaRep& rep,
                                     const Point& x);

// max |{gamma~^mu, gamma~^nu} - 2 g^{mu nu} I| with g^{mu nu} the inverse of the
// chart-induced metric.
double covariant_clifford_residual(const CoordinateChart& chart, const GammaRep& rep,
                                   const Point& x);

}  // namespace hjdirac
