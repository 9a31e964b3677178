#include "hjdirac/polynomial.hpp"

#include <cmath>

namespace hjdirac {
namespace {

double ipow(double base, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= base;
  return r;
}

// d^n/dx^n of x^p, times nothing else.
double dpow(double x, int p, int n) {
  if (n > p) return 0.0;
  double c = 1.0;
  for (int i = 0; i < n; ++i) c *= static_cast<double>(p - i);
  return c * ipow(x, p - n);
}

double eval_with_orders(const Monomial& m, const Point& x, const std::array<int, 4>& orders) {
  double v = m.coef;
  for (int i = 0; i < 4; ++i) {
    v *= dpow(x[i], m.powers[static_cast<std::size_t>(i)], orders[static_cast<std::size_t>(i)]);
    if (v == 0.0) return 0.0;
  }
  return v;
}

}  // namespace

double Polynomial4::operator()(const Point& x) const {
  double s = 0.0;
  for (const auto& m : terms) s += eval_with_orders(m, x, {0, 0, 0, 0});
  return s;
}

Eigen::Vector4d Polynomial4::gradient(const Point& x) const {
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  for (const auto& m : terms) {
    for (int i = 0; i < 4; ++i) {
      std::array<int, 4> o{0, 0, 0, 0};
      o[static_cast<std::size_t>(i)] = 1;
      g[i] += eval_with_orders(m, x, o);
    }
  }
  return g;
}

Mat4 Polynomial4::hessian(const Point& x) const {
  Mat4 h = Mat4::Zero();
  for (const auto& m : terms) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        std::array<int, 4> o{0, 0, 0, 0};
        o[static_cast<std::size_t>(i)] += 1;
        o[static_cast<std::size_t>(j)] += 1;
        const double v = eval_with_orders(m, x, o);
        h(i, j) += v;
        if (i != j) h(j, i) += v;
      }
    }
  }
  return h;
}

}  // namespace hjdirac
