#pragma once

#include "hjdirac/types.hpp"

#include <array>
#include <vector>

namespace hjdirac {

// Dirac representation of the tetrad gamma matrices:
//   gamma^0 = diag(1, 1, -1, -1),  gamma^k = [[0, sigma_k], [-sigma_k, 0]].
// Every entry is 0, +-1 or +-i, so the Clifford identities hold exactly.
struct GammaRep {
  std::array<CMat4, 4> gamma;  // upper index gamma^a
  std::array<CMat4, 4> alpha;  // alpha^0 = gamma^0, alpha^k = gamma^0 gamma^k

  const CMat4& operator[](int a) const { return gamma[static_cast<std::size_t>(a)]; }
  // gamma_a = eta_ab gamma^b
  CMat4 lowered(int a) const { return static_cast<double>(eta(a)) * (*this)[a]; }
};

GammaRep build_gamma_rep();

inline CMat4 anticommutator(const CMat4& a, const CMat4& b) { return a * b + b * a; }
inline CMat4 commutator(const CMat4& a, const CMat4& b) { return a * b - b * a; }

double frobenius_norm(const CMat4& m);
double max_abs(const CMat4& m);

// gamma_a v^a, the slashed vector.
struct SlashedOperator {
  CMat4 matrix;
  FourVector source;
};

SlashedOperator slash(const GammaRep& rep, const FourVector& v);
// gamma^a w_a for covariant components (e.g. a gradient).
CMat4 slash(const GammaRep& rep, const Covector& w);

struct EigenPair {
  Complex value;
  Bispinor vector;
};

struct Eigensystem {
  std::vector<EigenPair> pairs;  // (+root, +root, -root, -root)
  bool spacelike = false;        // roots are +-i sqrt(|v.v|)
};

// Spectrum of slash(v) from the projectors (I +- slash(v)/lambda)/2; each
// block is Gram-Schmidt orthonormalized and every vector's first nonzero
// component is made real-positive. Throws NullVector when |v.v| <= tol_null.
Eigensystem slash_eigensystem(const GammaRep& rep, const FourVector& v,
                              double tol_null = kNullTolerance);

// slash(u) slash(w) = dot I + wedge, wedge = [slash(u), slash(w)] / 2.
struct ProductDecomposition {
  double dot = 0.0;
  CMat4 wedge = CMat4::Zero();
};

ProductDecomposition product_decomposition(const GammaRep& rep, const FourVector& u,
                                           const FourVector& w);

}  // namespace hjdirac
