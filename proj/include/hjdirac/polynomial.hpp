#pragma once

#include "hjdirac/types.hpp"

#include <array>
#include <vector>

namespace hjdirac {

struct Monomial {
  double coef = 0.0;
  std::array<int, 4> powers{0, 0, 0, 0};
};

// Polynomial in the four coordinates with exact partial derivatives.
struct Polynomial4 {
  std::vector<Monomial> terms;

  double operator()(const Point& x) const;
  Eigen::Vector4d gradient(const Point& x) const;
  Mat4 hessian(const Point& x) const;
};

}  // namespace hjdirac
