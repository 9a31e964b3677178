#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace hjdirac {

using Complex = std::complex<double>;
using Point = Eigen::Vector4d;  // coordinates (x^0, x^1, x^2, x^3), x^0 = t
using Mat4 = Eigen::Matrix4d;
using CMat4 = Eigen::Matrix4cd;
using Bispinor = Eigen::Vector4cd;

// |v.v| at or below this is treated as null.
inline constexpr double kNullTolerance = 1e-10;

// Rigid Minkowski metric of signature -2: diag(+1, -1, -1, -1).
struct MinkowskiSignature {
  static constexpr std::array<int, 4> diag{1, -1, -1, -1};
  static constexpr int eta(int a) { return diag[static_cast<std::size_t>(a)]; }
  static constexpr int trace() { return diag[0] + diag[1] + diag[2] + diag[3]; }
  static Mat4 matrix() { return Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal(); }
};

inline constexpr int eta(int a) { return MinkowskiSignature::eta(a); }

enum class CausalType { Timelike, Null, Spacelike };

const char* to_string(CausalType t);

// Four components with the index position carried in the type.
template <class Tag>
class IndexedComponents {
 public:
  IndexedComponents() = default;
  explicit IndexedComponents(const Eigen::Vector4d& c) : c_(c) {}
  IndexedComponents(double c0, double c1, double c2, double c3) : c_(c0, c1, c2, c3) {}

  double operator[](int a) const { return c_[a]; }
  double& operator[](int a) { return c_[a]; }
  const Eigen::Vector4d& vec() const { return c_; }
  Eigen::Vector4d& vec() { return c_; }

  IndexedComponents operator+(const IndexedComponents& o) const { return IndexedComponents(c_ + o.c_); }
  IndexedComponents operator-(const IndexedComponents& o) const { return IndexedComponents(c_ - o.c_); }
  IndexedComponents operator-() const { return IndexedComponents(-c_); }
  IndexedComponents operator*(double s) const { return IndexedComponents(c_ * s); }
  friend IndexedComponents operator*(double s, const IndexedComponents& v) { return v * s; }
  IndexedComponents& operator+=(const IndexedComponents& o) { c_ += o.c_; return *this; }
  IndexedComponents& operator-=(const IndexedComponents& o) { c_ -= o.c_; return *this; }

 private:
  Eigen::Vector4d c_ = Eigen::Vector4d::Zero();
};

struct UpperIndex {};
struct LowerIndex {};

// Contravariant components v^a in a local tetrad, natural units (c = 1).
using FourVector = IndexedComponents<UpperIndex>;
// Covariant components w_a, e.g. the partials dW/dx^a.
using Covector = IndexedComponents<LowerIndex>;

inline Covector lower(const FourVector& v) {
  return Covector(v[0], -v[1], -v[2], -v[3]);
}
inline FourVector raise(const Covector& w) {
  return FourVector(w[0], -w[1], -w[2], -w[3]);
}

// eta_ab u^a w^b
inline double dot(const FourVector& u, const FourVector& w) {
  return u[0] * w[0] - u[1] * w[1] - u[2] * w[2] - u[3] * w[3];
}
inline double norm2(const FourVector& v) { return dot(v, v); }
// u^a w_a
inline double contract(const FourVector& u, const Covector& w) { return u.vec().dot(w.vec()); }

// Axis-aligned coordinate box [lo, hi].
struct Box {
  Point lo = Point::Zero();
  Point hi = Point::Zero();

  bool contains(const Point& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  Point extent() const { return hi - lo; }
  Point center() const { return 0.5 * (lo + hi); }
};

CausalType classify(const FourVector& v, double tol_null = kNullTolerance);
CausalType classify_norm2(double n2, double tol_null = kNullTolerance);

}  // namespace hjdirac
