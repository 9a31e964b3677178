#pragma once

#include "hjdirac/clifford.hpp"
#include "hjdirac/geometry.hpp"
#include "hjdirac/hamilton_jacobi.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hjdirac {

struct PhaseState {
  FourVector x;
  FourVector p;
  double s = 0.0;
};

enum class ModelKind { Free, Projectile, ProjectileArclength, Quadratic, Harmonic, Dilation, Custom };
const char* to_string(ModelKind kind);

// H(x, p, s) with partials taken with respect to the upper-index components.
struct HamiltonianModel {
  using Scalar = std::function<double(const FourVector&, const FourVector&, double)>;
  using Partial = std::function<Eigen::Vector4d(const FourVector&, const FourVector&, double)>;

  std::string name;
  ModelKind kind = ModelKind::Custom;
  double m0 = 0.0;
  Scalar H;
  Partial dH_dx;  // empty: central differences
  Partial dH_dp;  // empty: central differences
  bool separable = false;  // H = T(p) + V(x, s)

  // sqrt(m0^2 + |p|^2) over the spatial components.
  static HamiltonianModel free(double m0);
  // sqrt(m0^2 + |p|^2) + m0 g x^2.
  static HamiltonianModel projectile(double m0, double g);
  // eta_ab p^a p^b / (2 m0) - m0 g x^2; reproduces y = y0 + u_y s - g s^2 / 2.
  static HamiltonianModel projectile_arclength(double m0, double g);
  // eta_ab p^a p^b / 2
  static HamiltonianModel quadratic();
  // ((p^1)^2 + (x^1)^2) / 2
  static HamiltonianModel harmonic();
  // -rate eta_ab x^a p^b, for which dp/ds = rate p.
  static HamiltonianModel dilation(double rate);
};

struct PhaseDerivative {
  FourVector dx;
  FourVector dp;
};

// dx^a/ds = eta^ab dH/dp^b, dp^a/ds = -eta^ab dH/dx^b. Throws
// PartialEvaluationFailure when a partial is not finite.
PhaseDerivative hamilton_rhs(const HamiltonianModel& model, const PhaseState& state);

struct Trajectory {
  std::vector<PhaseState> samples;
  std::vector<double> H;
  std::vector<FourVector> pdot;
  std::vector<double> dm_ds;
  std::vector<double> comm_norm;
  double energy_drift = 0.0;  // max |H(s) - H(s0)|

  std::size_t size() const { return samples.size(); }
};

enum class Integrator { RK4, Leapfrog };
const char* to_string(Integrator method);

// Fixed steps from initial.s to s_end; the last step is shortened to land on
// s_end. Throws NonSeparable (leapfrog on a non-separable model) and
// StepRejected (non-finite state).
Trajectory integrate(const HamiltonianModel& model, const PhaseState& initial, double s_end,
                     double step, Integrator method = Integrator::RK4);

// Launch states: the relativistic projectile is started with p^i = -m0 u^i so
// that dx^i/ds = m0 u^i / H; the arclength model with p^a = m0 u^a.
PhaseState projectile_launch(const HamiltonianModel& model, double ux, double uy,
                             const Point& origin = Point::Zero());
// Exact flow of HamiltonianModel::projectile from any initial state.
PhaseState projectile_exact(double m0, double g, const PhaseState& initial, double s);

// Particle of mass m0 in a scalar potential V(x) on a curved chart:
//   dx^mu/dtau = p^mu / m0,
//   dp^mu/dtau = -Gamma^mu_{nu lambda} p^nu p^lambda / m0 - g^{mu nu} d_nu V.
struct CovariantModel {
  double m0 = 1.0;
  std::function<double(const Point&)> V;                // empty: V = 0
  std::function<Eigen::Vector4d(const Point&)> dV;      // empty: central differences of V
};

struct CovariantTrajectory {
  Trajectory chart;            // states in chart coordinates, diagnostics in tetrad components
  std::vector<Point> cartesian;
  std::vector<double> K;       // g_{mu nu} p^mu p^nu / (2 m0) + V
  double K_drift = 0.0;
};

// Throws SingularMetric and ChartBoundary.
CovariantTrajectory covariant_integrate(const MetricField& metric, const CoordinateChart& chart,
                                        const CovariantModel& model, const PhaseState& initial,
                                        double s_end, double step);

// |psi'(W) psi'(H)| |[slash p, slash pdot]|_F
double operator_commutator(const GammaRep& rep, const FourVector& p, const FourVector& pdot,
                           Complex psiW_prime = 1.0, Complex psiH_prime = 1.0);
// |[slash p, slash pdot]|_F / (|slash p|_F |slash pdot|_F), zero if either vanishes.
double normalized_commutator(const GammaRep& rep, const FourVector& p, const FourVector& pdot);

struct ForceDiagnostic {
  FourVector f;
  double dm_ds = 0.0;
  CausalType classification = CausalType::Null;
};

ForceDiagnostic force_diagnostic(const FourVector& f, double tol_null = kNullTolerance);
// f = dp/ds by three-point differences at an interior sample; throws BoundaryIndex.
ForceDiagnostic force_diagnostic(const Trajectory& trajectory, std::size_t index,
                                 double tol_null = kNullTolerance);

struct HessianCheck {
  double det = 0.0;
  double scale = 0.0;  // max |d^2 W / dx^i dx^j| over spatial i, j
  bool ok = false;     // |det| > 1e-10 scale^3
};

HessianCheck hessian_det_check(const HamiltonJacobiField& hj, const Point& x);

}  // namespace hjdirac
