#include "hjdirac/geometry.hpp"

#include "hjdirac/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hjdirac {
namespace {

constexpr double kMaxCondition = 1e12;

double condition_number(const Mat4& m) {
  Eigen::JacobiSVD<Mat4> svd(m);
  const auto& s = svd.singularValues();
  if (s[3] == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / s[3];
}

Mat4 checked_inverse(const Mat4& g) {
  if (!(condition_number(g) <= kMaxCondition)) {
    throw Error(ErrorKind::SingularMetric, "metric condition number exceeds 1e12");
  }
  return g.inverse();
}

double bilinear(const Mat4& g, const Eigen::Vector4d& u, const Eigen::Vector4d& v) {
  return u.dot(g * v);
}

}  // namespace

MetricField MetricField::minkowski() {
  MetricField m;
  m.name = "minkowski";
  m.g = [](const Point&) { return MinkowskiSignature::matrix(); };
  m.dg = [](const Point&) {
    MetricDerivatives d;
    d.fill(Mat4::Zero());
    return d;
  };
  return m;
}

MetricField MetricField::diagonal(const Eigen::Vector4d& diag) {
  MetricField m;
  m.name = "diagonal";
  m.g = [diag](const Point&) { return Mat4(diag.asDiagonal()); };
  m.dg = [](const Point&) {
    MetricDerivatives d;
    d.fill(Mat4::Zero());
    return d;
  };
  return m;
}

MetricField MetricField::polar() {
  MetricField m;
  m.name = "polar";
  m.g = [](const Point& x) {
    return Mat4(Eigen::Vector4d(1.0, -1.0, -x[1] * x[1], -1.0).asDiagonal());
  };
  m.dg = [](const Point& x) {
    MetricDerivatives d;
    d.fill(Mat4::Zero());
    d[1](2, 2) = -2.0 * x[1];
    return d;
  };
  return m;
}

MetricField MetricField::polynomial(const std::array<std::array<Polynomial4, 4>, 4>& polys) {
  MetricField m;
  m.name = "custom-polynomial";
  m.g = [polys](const Point& x) {
    Mat4 g;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i; j < 4; ++j) {
        g(static_cast<int>(i), static_cast<int>(j)) = polys[i][j](x);
        g(static_cast<int>(j), static_cast<int>(i)) = g(static_cast<int>(i), static_cast<int>(j));
      }
    }
    return g;
  };
  m.dg = [polys](const Point& x) {
    MetricDerivatives d;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i; j < 4; ++j) {
        const Eigen::Vector4d grad = polys[i][j].gradient(x);
        for (int l = 0; l < 4; ++l) {
          d[static_cast<std::size_t>(l)](static_cast<int>(i), static_cast<int>(j)) = grad[l];
          d[static_cast<std::size_t>(l)](static_cast<int>(j), static_cast<int>(i)) = grad[l];
        }
      }
    }
    return d;
  };
  return m;
}

MetricDerivatives metric_derivatives_fd(const MetricField& metric, const Point& x) {
  MetricDerivatives d;
  for (int l = 0; l < 4; ++l) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[l]));
    Point xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    d[static_cast<std::size_t>(l)] = (metric(xp) - metric(xm)) / (2.0 * h);
  }
  return d;
}

MetricDerivatives metric_derivatives(const MetricField& metric, const Point& x) {
  return metric.has_analytic_derivatives() ? metric.dg(x) : metric_derivatives_fd(metric, x);
}

bool has_lorentzian_signature(const Mat4& g) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double tiny = 1e-14 * ev.cwiseAbs().maxCoeff();
  int pos = 0, neg = 0;
  for (int i = 0; i < 4; ++i) {
    if (ev[i] > tiny) ++pos;
    else if (ev[i] < -tiny) ++neg;
  }
  return pos == 1 && neg == 3;
}

double TetradFrame::residual(const Mat4& g) const {
  return (e * g * e.transpose() - MinkowskiSignature::matrix()).cwiseAbs().maxCoeff();
}

FourVector TetradFrame::to_tetrad(const Mat4& g, const Eigen::Vector4d& coordinate_vector) const {
  const Eigen::Vector4d lowered = e * (g * coordinate_vector);  // g(e_b, v)
  return FourVector(lowered[0], -lowered[1], -lowered[2], -lowered[3]);
}

TetradFrame tetrad_at(const MetricField& metric, const Point& x) {
  const Mat4 g = metric(x);
  if (!has_lorentzian_signature(g)) {
    throw Error(ErrorKind::BadSignature, "metric '" + metric.name + "' is not (+,-,-,-) at sample point");
  }
  const double scale = g.cwiseAbs().maxCoeff();
  std::array<Eigen::Vector4d, 4> legs;
  int used_coordinate = -1;

  // Timelike leg: first coordinate direction with g(v,v) > 0.
  for (int mu = 0; mu < 4 && used_coordinate < 0; ++mu) {
    if (g(mu, mu) > 1e-12 * scale) used_coordinate = mu;
  }
  Eigen::Vector4d t;
  if (used_coordinate >= 0) {
    t = Eigen::Vector4d::Unit(used_coordinate);
  } else {
    Eigen::SelfAdjointEigenSolver<Mat4> es(g);
    t = es.eigenvectors().col(3);  // eigenvalues ascending, the single positive one is last
  }
  legs[0] = t / std::sqrt(bilinear(g, t, t));

  int filled = 1;
  for (int mu = 0; mu < 4 && filled < 4; ++mu) {
    if (mu == used_coordinate) continue;
    Eigen::Vector4d w = Eigen::Vector4d::Unit(mu);
    for (int b = 0; b < filled; ++b) {
      // projection coefficient g(w, e_b) / eta_bb
      w -= (bilinear(g, w, legs[static_cast<std::size_t>(b)]) * eta(b)) * legs[static_cast<std::size_t>(b)];
    }
    const double n2 = -bilinear(g, w, w);
    if (n2 > 1e-12 * scale * w.squaredNorm()) {
      legs[static_cast<std::size_t>(filled++)] = w / std::sqrt(n2);
    }
  }
  if (filled < 4) throw Error(ErrorKind::BadSignature, "could not complete a spatial triad");

  TetradFrame frame;
  for (int a = 0; a < 4; ++a) frame.e.row(a) = legs[static_cast<std::size_t>(a)].transpose();
  return frame;
}

double ChristoffelField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

ChristoffelField christoffel_from(const Mat4& g, const MetricDerivatives& dg) {
  const Mat4 ginv = checked_inverse(g);
  ChristoffelField out;
  for (int nu = 0; nu < 4; ++nu) {
    for (int la = nu; la < 4; ++la) {
      // lowered: [sigma] = d_nu g_{sigma la} + d_la g_{sigma nu} - d_sigma g_{nu la}
      Eigen::Vector4d low;
      for (int s = 0; s < 4; ++s) {
        low[s] = dg[static_cast<std::size_t>(nu)](s, la) + dg[static_cast<std::size_t>(la)](s, nu) -
                 dg[static_cast<std::size_t>(s)](nu, la);
      }
      const Eigen::Vector4d up = 0.5 * ginv * low;
      for (int mu = 0; mu < 4; ++mu) {
        out.at(mu, nu, la) = up[mu];
        out.at(mu, la, nu) = up[mu];
      }
    }
  }
  return out;
}

ChristoffelField christoffel_at(const MetricField& metric, const Point& x) {
  return christoffel_from(metric(x), metric_derivatives(metric, x));
}

double metric_compatibility_residual(const Mat4& g, const MetricDerivatives& dg,
                                     const ChristoffelField& c) {
  double worst = 0.0;
  for (int la = 0; la < 4; ++la) {
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        double r = dg[static_cast<std::size_t>(la)](mu, nu);
        for (int s = 0; s < 4; ++s) r -= c(s, la, mu) * g(s, nu) + c(s, la, nu) * g(mu, s);
        worst = std::max(worst, std::abs(r));
      }
    }
  }
  return worst;
}

Mat4 CoordinateChart::inverse_jacobian(const Point& x) const {
  const Mat4 j = jacobian(x);
  if (!(std::abs(j.determinant()) > 1e-12) || !(condition_number(j) <= kMaxCondition)) {
    throw Error(ErrorKind::SingularJacobian, "chart '" + name + "' Jacobian is not invertible");
  }
  return j.inverse();
}

MetricField CoordinateChart::induced_metric() const {
  MetricField m;
  m.name = name + "-induced";
  auto jac = jacobian;
  m.g = [jac](const Point& x) {
    const Mat4 j = jac(x);
    return Mat4(j.transpose() * MinkowskiSignature::matrix() * j);
  };
  return m;
}

CoordinateChart CoordinateChart::identity() {
  CoordinateChart c;
  c.name = "identity";
  c.to_cartesian = [](const Point& x) { return x; };
  c.from_cartesian = [](const Point& x) { return x; };
  c.jacobian = [](const Point&) { return Mat4::Identity(); };
  return c;
}

CoordinateChart CoordinateChart::polar() {
  CoordinateChart c;
  c.name = "polar";
  c.to_cartesian = [](const Point& x) {
    return Point(x[0], x[1] * std::cos(x[2]), x[1] * std::sin(x[2]), x[3]);
  };
  c.from_cartesian = [](const Point& X) {
    return Point(X[0], std::hypot(X[1], X[2]), std::atan2(X[2], X[1]), X[3]);
  };
  c.jacobian = [](const Point& x) {
    const double r = x[1], ct = std::cos(x[2]), st = std::sin(x[2]);
    Mat4 j = Mat4::Identity();
    j(1, 1) = ct;
    j(1, 2) = -r * st;
    j(2, 1) = st;
    j(2, 2) = r * ct;
    return j;
  };
  c.domain = [](const Point& x) { return x[1] > 0.0; };
  return c;
}

CoordinateChart CoordinateChart::rescaled_time(double factor) {
  if (!(factor != 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::InvalidArgument, "time rescaling factor must be finite and nonzero");
  }
  CoordinateChart c;
  c.name = "rescaled-time";
  c.to_cartesian = [factor](const Point& x) { return Point(x[0] / factor, x[1], x[2], x[3]); };
  c.from_cartesian = [factor](const Point& X) { return Point(X[0] * factor, X[1], X[2], X[3]); };
  c.jacobian = [factor](const Point&) {
    Mat4 j = Mat4::Identity();
    j(0, 0) = 1.0 / factor;
    return j;
  };
  return c;
}

std::array<CMat4, 4> covariant_gamma(const CoordinateChart& chart, const GammaRep& rep,
                                     const Point& x) {
  const Mat4 jinv = chart.inverse_jacobian(x);
  std::array<CMat4, 4> out;
  for (int mu = 0; mu < 4; ++mu) {
    CMat4 m = CMat4::Zero();
    for (int a = 0; a < 4; ++a) m += jinv(mu, a) * rep[a];
    out[static_cast<std::size_t>(mu)] = m;
  }
  return out;
}

double covariant_clifford_residual(const CoordinateChart& chart, const GammaRep& rep,
                                   const Point& x) {
  const auto gt = covariant_gamma(chart, rep, x);
  const Mat4 ginv = checked_inverse(chart.induced_metric()(x));
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const CMat4 r = anticommutator(gt[static_cast<std::size_t>(mu)], gt[static_cast<std::size_t>(nu)]) -
                      2.0 * ginv(mu, nu) * CMat4::Identity();
      worst = std::max(worst, max_abs(r));
    }
  }
  return worst;
}

}  // namespace hjdirac
