#pragma once

#include "hjdirac/clifford.hpp"
#include "hjdirac/hamilton_jacobi.hpp"

#include <functional>
#include <optional>
#include <string>

namespace hjdirac {

// psi composed with W. For psi = A exp(kappa W), psi' = kappa psi.
struct WaveFunction {
  std::string name;
  std::function<Complex(double)> psi;
  std::function<Complex(double)> psi_prime;
  std::optional<Complex> kappa;

  static WaveFunction identity();
  static WaveFunction constant(Complex c);
  static WaveFunction exponential(Complex amplitude, Complex kappa);
};

// gamma^a d_a psi(W) = psi'(W) gamma^a dW/dx^a
CMat4 dirac_slash_gradient(const GammaRep& rep, const WaveFunction& wf,
                           const HamiltonJacobiField& hj, const Point& x);

enum class Parameterization { Affine, Arclength };

struct Curve {
  std::function<Point(double)> position;
  std::function<FourVector(double)> tangent;
  Parameterization parameterization = Parameterization::Arclength;

  // x(s) = x0 + s u for a constant timelike u (normalized when arclength).
  static Curve straight(const Point& x0, const FourVector& u);
  static Curve projectile(const ProjectileField& field);
};

// slash(u) slash(grad psi) = scalar I + wedge at the curve point, with
// grad psi = psi'(W) dW. The scalar part is compared against a central
// difference of psi(W(x(s))) in s.
struct CurveSplit {
  Complex scalar;
  CMat4 wedge = CMat4::Zero();
  Complex along_curve;  // d psi / ds by central differences, h = 1e-5 max(1, |s|)
  double reconstruction_residual = 0.0;
  double derivative_residual = 0.0;
  double wedge_trace = 0.0;
};

CurveSplit split_along_curve(const GammaRep& rep, const Curve& curve, const WaveFunction& wf,
                             const HamiltonJacobiField& hj, double s);

struct SpinorState {
  Bispinor xi = Bispinor::Zero();
  FourVector momentum;
  Complex eigenvalue_v;
  Complex eigenvalue_w;
  double residual_v = 0.0;  // |slash(v) xi - eigenvalue_v xi|
  double residual_w = 0.0;
};

// Common eigenvector of slash(v) and slash(w). The vector with the larger
// |norm^2| fixes xi (its first +root eigenvector); the eigenvalues are the
// Rayleigh quotients. Throws NotCommuting when |[slash v, slash w]|_F > tol.
SpinorState simultaneous_eigenvector(const GammaRep& rep, const FourVector& v,
                                     const FourVector& w, double tol = 1e-8);

// Plane wave Psi = exp(-kappa p.x) xi with hbar = 1.
struct DiracResidual {
  double gamma_form = 0.0;  // |gamma^a d_a Psi + i m0 Psi| / |Psi|
  double alpha_form = 0.0;  // same equation after multiplying through by gamma^0
};

// Throws OffShell when |p.p - m0^2| > 1e-10 max(1, m0^2).
DiracResidual conventional_dirac_residual(const GammaRep& rep, Complex kappa, double m0,
                                          const FourVector& p, const Bispinor& xi);

// Unit tangent field u and momentum field p on a chart region.
struct Congruence {
  std::string name;
  std::function<FourVector(const Point&)> tangent;
  std::function<FourVector(const Point&)> momentum;
  std::function<bool(const Point&)> domain;

  bool contains(const Point& x) const { return !domain || domain(x); }

  static Congruence uniform(const FourVector& u, double m0);
  // Straight lines out of a base event: u = (x - x0) / s, p = m0 u. The
  // axis mask matches GeodesicOptions::spatial_axes.
  static Congruence radial(const Point& base_point, double m0,
                           std::array<bool, 3> spatial_axes = {true, true, true});
  // Curves leaving the surface t = t0 with 3-velocity V(y), integrated as
  // free motion with RK4; the curve through x is found by Newton iteration.
  static Congruence from_initial_surface(double t0,
                                         std::function<Eigen::Vector3d(const Eigen::Vector3d&)> velocity,
                                         double m0, int rk4_steps = 32);

  // u rotated in the (x^1, x^2) plane by the angle rate * x^1; p unchanged.
  Congruence with_shear(double rate) const;
  // p + c for a constant vector c; u unchanged.
  Congruence with_drift(const FourVector& c) const;
};

// u^b d_b p^a - p^b d_b u^a by central differences, h = 1e-5 max(1, |x^b|).
FourVector lie_derivative(const Congruence& congruence, const Point& x);

struct LieTransportOptions {
  int n_samples = 32;
  double lie_tol = 1e-6;
  double dirac_tol = 1e-8;
  bool extract_parallel = true;  // retry the Dirac side on W_par when raw W fails
};

enum class Verdict { BothPass, BothFail, Mixed };
const char* to_string(Verdict v);

struct LieTransportReport {
  double lie_residual = 0.0;     // max |L_u p|
  double commutator_norm = 0.0;  // max |[slash grad W, slash u]|_F
  double eigen_residual = 0.0;   // max |psi'(slash(grad W) xi - (u.grad W) xi)|, xi in the +1 space of slash(u)
  bool lie_pass = false;
  bool dirac_pass = false;
  bool used_parallel_part = false;
  std::optional<Covector> spin;
  double raw_commutator_norm = 0.0;
  Verdict verdict = Verdict::Mixed;
};

// Both sides of the Lie transport criterion on random points of the region.
LieTransportReport lie_transport_check(const GammaRep& rep, const Congruence& congruence,
                                       const HamiltonJacobiField& hj, const WaveFunction& wf,
                                       const Box& region, Rng& rng,
                                       const LieTransportOptions& options = {});

}  // namespace hjdirac
