#include "hjdirac/loaders.hpp"

#include "hjdirac/error.hpp"

namespace hjdirac {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, where + " must be a JSON object");
}

std::string kind_of(const json& j, const std::string& where) {
  require_object(j, where);
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw Error(ErrorKind::InvalidArgument, where + " needs a string 'kind'");
  }
  return j["kind"].get<std::string>();
}

double number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw Error(ErrorKind::InvalidArgument, where + "." + key + " must be a number");
  return j[key].get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> vector_of(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(ErrorKind::InvalidArgument, where + " needs '" + key + "'");
  const json& a = j[key];
  if (!a.is_array() || a.size() != static_cast<std::size_t>(N)) {
    throw Error(ErrorKind::InvalidArgument, where + "." + key + " must be an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    if (!a[static_cast<std::size_t>(i)].is_number()) {
      throw Error(ErrorKind::InvalidArgument, where + "." + key + " must contain numbers");
    }
    v[i] = a[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

}  // namespace

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  require_object(obj, where);
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw Error(ErrorKind::InvalidArgument, "unknown key '" + item.key() + "' in " + where);
  }
}

Polynomial4 load_polynomial(const json& terms) {
  if (!terms.is_array()) throw Error(ErrorKind::InvalidArgument, "polynomial terms must be an array");
  Polynomial4 poly;
  for (const auto& t : terms) {
    reject_unknown_keys(t, {"coef", "powers"}, "polynomial term");
    Monomial m;
    m.coef = number(t, "coef", 0.0, "polynomial term");
    if (t.contains("powers")) {
      const json& p = t["powers"];
      if (!p.is_array() || p.size() != 4) {
        throw Error(ErrorKind::InvalidArgument, "polynomial powers must be an array of 4 integers");
      }
      for (std::size_t i = 0; i < 4; ++i) {
        if (!p[i].is_number_integer() || p[i].get<int>() < 0) {
          throw Error(ErrorKind::InvalidArgument, "polynomial powers must be non-negative integers");
        }
        m.powers[i] = p[i].get<int>();
      }
    }
    poly.terms.push_back(m);
  }
  return poly;
}

MetricField load_metric(const json& spec) {
  const std::string kind = kind_of(spec, "metric");
  if (kind == "minkowski") {
    reject_unknown_keys(spec, {"kind"}, "metric");
    return MetricField::minkowski();
  }
  if (kind == "diagonal") {
    reject_unknown_keys(spec, {"kind", "diag"}, "metric");
    return MetricField::diagonal(vector_of<4>(spec, "diag", "metric"));
  }
  if (kind == "polar") {
    reject_unknown_keys(spec, {"kind"}, "metric");
    return MetricField::polar();
  }
  if (kind == "custom-polynomial") {
    reject_unknown_keys(spec, {"kind", "components"}, "metric");
    if (!spec.contains("components")) throw Error(ErrorKind::InvalidArgument, "metric needs 'components'");
    const json& comps = spec["components"];
    require_object(comps, "metric.components");
    std::array<std::array<Polynomial4, 4>, 4> polys;
    for (const auto& item : comps.items()) {
      const std::string& key = item.key();
      if (key.size() != 2 || key[0] < '0' || key[0] > '3' || key[1] < '0' || key[1] > '3' || key[0] > key[1]) {
        throw Error(ErrorKind::InvalidArgument, "metric component key '" + key + "' must be 'mn' with m <= n");
      }
      polys[static_cast<std::size_t>(key[0] - '0')][static_cast<std::size_t>(key[1] - '0')] =
          load_polynomial(item.value());
    }
    return MetricField::polynomial(polys);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown metric kind '" + kind + "'");
}

CoordinateChart load_chart(const json& spec) {
  const std::string kind = kind_of(spec, "chart");
  if (kind == "identity") {
    reject_unknown_keys(spec, {"kind"}, "chart");
    return CoordinateChart::identity();
  }
  if (kind == "polar") {
    reject_unknown_keys(spec, {"kind"}, "chart");
    return CoordinateChart::polar();
  }
  if (kind == "rescaled-time") {
    reject_unknown_keys(spec, {"kind", "factor"}, "chart");
    return CoordinateChart::rescaled_time(number(spec, "factor", 2.0, "chart"));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown chart kind '" + kind + "'");
}

HamiltonJacobiField load_field(const json& spec) {
  const std::string kind = kind_of(spec, "field");
  if (kind == "geodesic") {
    reject_unknown_keys(spec, {"kind", "m0", "base", "k"}, "field");
    GeodesicOptions opt;
    opt.k = number(spec, "k", 0.0, "field");
    const Point base = spec.contains("base") ? Point(vector_of<4>(spec, "base", "field")) : Point::Zero();
    return construct_geodesic_W(number(spec, "m0", 1.0, "field"), base, opt);
  }
  if (kind == "projectile") {
    reject_unknown_keys(spec, {"kind", "m0", "ux", "uy", "g", "s", "origin", "w0"}, "field");
    const Point origin = spec.contains("origin") ? Point(vector_of<4>(spec, "origin", "field")) : Point::Zero();
    const ProjectileField p(number(spec, "m0", 1.0, "field"), number(spec, "ux", 1.0, "field"),
                            number(spec, "uy", 2.0, "field"), number(spec, "g", 1.0, "field"), origin,
                            number(spec, "w0", 0.0, "field"));
    return p.at(number(spec, "s", 0.0, "field"));
  }
  if (kind == "plane-wave") {
    reject_unknown_keys(spec, {"kind", "p", "m0"}, "field");
    return plane_wave_field(vector_of<3>(spec, "p", "field"), number(spec, "m0", 0.0, "field"));
  }
  if (kind == "custom-polynomial") {
    reject_unknown_keys(spec, {"kind", "m0", "terms"}, "field");
    if (!spec.contains("terms")) throw Error(ErrorKind::InvalidArgument, "field needs 'terms'");
    return polynomial_field(load_polynomial(spec["terms"]), number(spec, "m0", 0.0, "field"));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown field kind '" + kind + "'");
}

}  // namespace hjdirac
