#pragma once

#include "hjdirac/geometry.hpp"
#include "hjdirac/rng.hpp"
#include "hjdirac/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hjdirac {

enum class GradientMode { Analytic, FiniteDifference };

using ScalarField = std::function<double(const Point&)>;
using CovectorField = std::function<Covector(const Point&)>;

// Scalar W on a chart. Its differential dW = p.dx - H dt, so the covariant
// components of the gradient are (dW/dt, p_1, p_2, p_3) with H = -dW/dt.
struct HamiltonJacobiField {
  std::string name;
  ScalarField value;
  CovectorField analytic_gradient;                 // empty: central differences
  std::function<Mat4(const Point&)> analytic_hessian;  // empty: differences
  std::function<bool(const Point&)> domain;        // empty: whole chart
  double m0 = 0.0;

  double operator()(const Point& x) const { return value(x); }
  bool contains(const Point& x) const { return !domain || domain(x); }
  GradientMode mode() const {
    return analytic_gradient ? GradientMode::Analytic : GradientMode::FiniteDifference;
  }
};

// (dW/dt, dW/dx^1, dW/dx^2, dW/dx^3). Central differences use
// h = 1e-6 * max(1, |x^a|). Throws DomainBoundary outside the domain.
Covector gradient(const HamiltonJacobiField& field, const Point& x);
double hamiltonian(const HamiltonJacobiField& field, const Point& x);
// Full 4x4 Hessian: analytic, else differences of the analytic gradient,
// else second differences of W with h = 1e-4 * max(1, |x^a|).
Mat4 hessian(const HamiltonJacobiField& field, const Point& x);

// Fixed fields.
HamiltonJacobiField constant_field(double c);
// W = k_a x^a with k on the massless shell when m0 = 0: W = p.x - |p| t.
HamiltonJacobiField plane_wave_field(const Eigen::Vector3d& p, double m0 = 0.0);
HamiltonJacobiField polynomial_field(const Polynomial4& w, double m0 = 0.0);

struct LoopRecord {
  int axis_a = 0;  // loop plane (axis_a, axis_b), traversed counterclockwise
  int axis_b = 1;
  Point corner = Point::Zero();
  double side_a = 0.0;
  double side_b = 0.0;
  double integral = 0.0;
  double scale = 0.0;  // perimeter * mean |omega| along the loop, at least 1

  double area() const { return side_a * side_b; }
};

struct ExactnessOptions {
  int n_loops = 6;
  int segments = 10000;  // per loop, split evenly over the four sides
  int n_points = 16;     // closedness sample points
  double closedness_tol = 1e-6;
  double loop_tol = 1e-8;  // relative to the loop scale
};

struct HJReport {
  double closedness_residual = 0.0;
  double max_loop_integral = 0.0;
  double max_loop_ratio = 0.0;  // max |integral| / scale
  std::optional<double> mass_shell_residual;
  double closedness_tol = 0.0;
  double loop_tol = 0.0;
  std::optional<double> mass_shell_tol;
  std::vector<LoopRecord> loops;
  bool pass = false;
};

// Closedness of omega at random points of the region plus explicit loop
// integrals (composite trapezoid) around random axis-aligned rectangles.
// Loop i lies in plane i mod 6 of (01, 02, 03, 12, 13, 23).
HJReport is_exact_form(const CovectorField& omega, const Box& region, Rng& rng,
                       const ExactnessOptions& options = {});
HJReport is_exact(const HamiltonJacobiField& field, const Box& region, Rng& rng,
                  const ExactnessOptions& options = {});

// Trapezoid line integral of omega around one counterclockwise rectangle.
double loop_integral(const CovectorField& omega, int axis_a, int axis_b, const Point& corner,
                     double side_a, double side_b, int segments);

// max |H^2 - |p|^2 - m0^2| over the points.
double mass_shell_check(const HamiltonJacobiField& field, const std::vector<Point>& points);

struct ScaleFunction {
  std::string name;
  std::function<double(double)> psi;
  std::function<double(double)> psi_prime;
};

struct ScaleReport {
  HJReport forward;                 // omega* = psi'(W) dW
  std::optional<HJReport> inverse;  // dW recovered from psi(W) through psi^-1
  double inverse_recovery = 0.0;    // max |psi^-1(psi(W)) - W| on samples
  bool monotone = true;             // false: NonMonotone, inverse skipped
  bool pass = false;
};

// Forward and converse directions of the scaling property on the region.
ScaleReport scale_check(const HamiltonJacobiField& field, const ScaleFunction& psi,
                        const Box& region, Rng& rng, const ExactnessOptions& options = {});

struct GeodesicOptions {
  double k = 0.0;
  // Spatial axes entering |x - x0|; switch axes off to build lower-dimensional
  // families (e.g. only x^1 for motion in the (t, x^1) plane).
  std::array<bool, 3> spatial_axes{true, true, true};
  std::optional<CoordinateChart> chart;
};

// W = m0 * s + k with s = sqrt((t - t0)^2 - |x - x0|^2), future sheet only.
// Evaluation at points not future-timelike separated from the base point
// throws NonTimelikeSeparation.
HamiltonJacobiField construct_geodesic_W(double m0, const Point& base_point,
                                         const GeodesicOptions& options = {});

// Launch (t0, x0, y0, z0) with proper velocity (u_x, u_y) and uniform field g
// along -y. Position in tetrad order (t, x, y, z) as a function of arclength.
class ProjectileField {
 public:
  ProjectileField(double m0, double ux, double uy, double g, const Point& origin = Point::Zero(),
                  double w0 = 0.0);

  double tdot(double s) const;
  Point position(double s) const;
  FourVector velocity(double s) const;  // dx^a/ds
  // (-m0 tdot, m0 u_x, m0 (u_y - g s), 0), the gradient at arclength s.
  Covector momentum(double s) const;
  // The linear field whose gradient is momentum(s); its value at position(s)
  // is the Example's W at that instant.
  HamiltonJacobiField at(double s) const;

  double m0() const { return m0_; }
  double ux() const { return ux_; }
  double uy() const { return uy_; }
  double g() const { return g_; }
  const Point& origin() const { return origin_; }

 private:
  double m0_, ux_, uy_, g_;
  Point origin_;
  double w0_;
};

ProjectileField projectile_field(double m0, double ux, double uy, double g,
                                 const Point& origin = Point::Zero(), double w0 = 0.0);

struct PerpDecomposition {
  HamiltonJacobiField w_par;
  Covector spin;          // constants c_a with W = W_par + c_a x^a
  double residual = 0.0;  // rms of the part of grad W - c transverse to the tangents
};

using TangentField = std::function<FourVector(const Point&)>;

// Least squares for c over the samples: sum_i P_i (grad W(x_i) - c) = 0 with
// P_i the Euclidean projector transverse to the lowered tangent at x_i.
// Throws IllConditioned when the normal matrix is singular.
PerpDecomposition decompose_parallel_perp(const HamiltonJacobiField& field,
                                          const TangentField& tangent,
                                          const std::vector<Point>& samples);

}  // namespace hjdirac
