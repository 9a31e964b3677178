#include "hjdirac/clifford.hpp"

#include "hjdirac/error.hpp"

#include <cmath>

namespace hjdirac {
namespace {

const Complex kI(0.0, 1.0);

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  switch (k) {
    case 1:
      s << 0.0, 1.0, 1.0, 0.0;
      break;
    case 2:
      s << 0.0, -kI, kI, 0.0;
      break;
    case 3:
      s << 1.0, 0.0, 0.0, -1.0;
      break;
    default:
      break;
  }
  return s;
}

void fix_phase(Bispinor& v) {
  for (int i = 0; i < 4; ++i) {
    const double mag = std::abs(v[i]);
    if (mag > 1e-12) {
      v *= std::conj(v[i]) / mag;
      v[i] = Complex(v[i].real(), 0.0);
      return;
    }
  }
}

// Orthonormal basis for the column space of a rank-2 projector.
std::vector<Bispinor> projector_basis(const CMat4& projector) {
  std::vector<Bispinor> basis;
  const double scale = std::max(1.0, max_abs(projector));
  for (int j = 0; j < 4 && basis.size() < 2; ++j) {
    Bispinor w = projector.col(j);
    for (const auto& e : basis) w -= e.dot(w) * e;  // dot() conjugates the left operand
    const double n = w.norm();
    if (n > 1e-8 * scale) basis.push_back(w / n);
  }
  for (auto& e : basis) fix_phase(e);
  return basis;
}

}  // namespace

GammaRep build_gamma_rep() {
  GammaRep rep;
  rep.gamma[0] = CMat4::Zero();
  rep.gamma[0].diagonal() << 1.0, 1.0, -1.0, -1.0;
  for (int k = 1; k <= 3; ++k) {
    CMat4 g = CMat4::Zero();
    g.block<2, 2>(0, 2) = pauli(k);
    g.block<2, 2>(2, 0) = -pauli(k);
    rep.gamma[static_cast<std::size_t>(k)] = g;
  }
  rep.alpha[0] = rep.gamma[0];
  for (std::size_t k = 1; k < 4; ++k) rep.alpha[k] = rep.gamma[0] * rep.gamma[k];
  return rep;
}

double frobenius_norm(const CMat4& m) { return m.norm(); }

double max_abs(const CMat4& m) { return m.cwiseAbs().maxCoeff(); }

SlashedOperator slash(const GammaRep& rep, const FourVector& v) {
  CMat4 m = CMat4::Zero();
  for (int a = 0; a < 4; ++a) m += v[a] * rep.lowered(a);
  return {m, v};
}

CMat4 slash(const GammaRep& rep, const Covector& w) {
  CMat4 m = CMat4::Zero();
  for (int a = 0; a < 4; ++a) m += w[a] * rep[a];
  return m;
}

Eigensystem slash_eigensystem(const GammaRep& rep, const FourVector& v, double tol_null) {
  const double n2 = norm2(v);
  if (std::abs(n2) <= tol_null) {
    throw Error(ErrorKind::NullVector, "slash eigensystem needs |v.v| > tol_null");
  }
  Eigensystem out;
  out.spacelike = n2 < 0.0;
  const Complex root = out.spacelike ? Complex(0.0, std::sqrt(-n2)) : Complex(std::sqrt(n2), 0.0);
  const CMat4 s = slash(rep, v).matrix;
  const CMat4 id = CMat4::Identity();
  for (const Complex lambda : {root, -root}) {
    const CMat4 projector = 0.5 * (id + s / lambda);
    for (const auto& vec : projector_basis(projector)) out.pairs.push_back({lambda, vec});
  }
  return out;
}

ProductDecomposition product_decomposition(const GammaRep& rep, const FourVector& u,
                                           const FourVector& w) {
  const CMat4 su = slash(rep, u).matrix;
  const CMat4 sw = slash(rep, w).matrix;
  return {dot(u, w), 0.5 * commutator(su, sw)};
}

}  // namespace hjdirac
