#include <doctest.h>

#include "hjdirac/error.hpp"
#include "hjdirac/loaders.hpp"
#include "hjdirac/polynomial.hpp"
#include "hjdirac/report_json.hpp"
#include "hjdirac/rng.hpp"

#include <cmath>
#include <numbers>

using namespace hjdirac;
using nlohmann::json;

TEST_CASE("splitmix64 reference value") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("generator streams") {
  Rng a(5, 0), b(5, 0), c(5, 1), d(6, 0);
  const std::uint64_t x = a.next_u64();
  CHECK(x == b.next_u64());
  CHECK(x != c.next_u64());
  CHECK(x != d.next_u64());

  Rng r(1);
  double sum = 0, sum2 = 0, esum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
    esum += r.exponential(2.0);
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(esum / n - 0.5) < 4.0 * 0.5 / std::sqrt(n));

  const Box box{Point(0, 1, 2, 3), Point(1, 2, 3, 4)};
  for (int i = 0; i < 100; ++i) CHECK(box.contains(uniform_point(r, box)));
}

TEST_CASE("causal classification") {
  CHECK(classify(FourVector(2, 1, 0, 0)) == CausalType::Timelike);
  CHECK(classify(FourVector(1, 1, 0, 0)) == CausalType::Null);
  CHECK(classify(FourVector(1, 2, 0, 0)) == CausalType::Spacelike);
  CHECK(MinkowskiSignature::trace() == -2);
  CHECK(dot(FourVector(1, 2, 3, 4), FourVector(1, 1, 1, 1)) == -8.0);
  CHECK(contract(FourVector(1, 2, 3, 4), lower(FourVector(1, 1, 1, 1))) == -8.0);
  CHECK(raise(lower(FourVector(1, 2, 3, 4))).vec() == Eigen::Vector4d(1, 2, 3, 4));
}

TEST_CASE("errors carry their kind") {
  const Error e(ErrorKind::NotCommuting, "x");
  CHECK(e.kind() == ErrorKind::NotCommuting);
  CHECK(to_string(ErrorKind::NotCommuting) == "NotCommuting");
  CHECK(std::string(e.what()).find('x') != std::string::npos);
}

TEST_CASE("polynomial derivatives") {
  Polynomial4 p;
  p.terms = {{2.0, {1, 2, 0, 0}}, {-0.5, {0, 0, 3, 1}}, {1.0, {0, 0, 0, 0}}};
  const Point x(0.7, -1.1, 0.4, 2.0);
  CHECK(p(x) == doctest::Approx(2 * 0.7 * 1.21 - 0.5 * 0.064 * 2 + 1));
  const double h = 1e-5;
  const Eigen::Vector4d g = p.gradient(x);
  const Mat4 H = p.hessian(x);
  for (int a = 0; a < 4; ++a) {
    Point xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    CHECK(g[a] == doctest::Approx((p(xp) - p(xm)) / (2 * h)).epsilon(1e-8));
    const Eigen::Vector4d dg = (p.gradient(xp) - p.gradient(xm)) / (2 * h);
    for (int b = 0; b < 4; ++b) CHECK(H(a, b) == doctest::Approx(dg[b]).epsilon(1e-8).scale(1));
  }
}

TEST_CASE("loaders") {
  SUBCASE("metrics") {
    CHECK(load_metric(json{{"kind", "minkowski"}})(Point::Zero()) == MinkowskiSignature::matrix());
    CHECK(load_metric(json{{"kind", "diagonal"}, {"diag", {2, -1, -1, -3}}})(Point::Zero())(3, 3) == -3.0);
    CHECK(load_metric(json{{"kind", "polar"}})(Point(0, 2, 0, 0))(2, 2) == -4.0);
    const json custom = json::parse(R"({"kind": "custom-polynomial", "components": {
        "00": [{"coef": 1, "powers": [0,0,0,0]}, {"coef": 1, "powers": [0,2,0,0]}],
        "01": [{"coef": 0.1, "powers": [0,0,0,0]}],
        "11": [{"coef": -1, "powers": [0,0,0,0]}],
        "22": [{"coef": -1, "powers": [0,0,0,0]}],
        "33": [{"coef": -1, "powers": [0,0,0,0]}]}})");
    const MetricField m = load_metric(custom);
    const Mat4 g = m(Point(0, 2, 0, 0));
    CHECK(g(0, 0) == 5.0);
    CHECK(g(1, 0) == 0.1);
    CHECK(g(0, 1) == 0.1);
    CHECK(m.has_analytic_derivatives());
    CHECK(metric_derivatives(m, Point(0, 2, 0, 0))[1](0, 0) == 4.0);
  }
  SUBCASE("charts and fields") {
    CHECK(load_chart(json{{"kind", "rescaled-time"}, {"factor", 2.0}}).to_cartesian(Point(4, 0, 0, 0))[0] == 2.0);
    CHECK(load_chart(json{{"kind", "polar"}}).name == "polar");
    const HamiltonJacobiField geo = load_field(json{{"kind", "geodesic"}, {"m0", 2.0}, {"base", {0, 0, 0, 0}}});
    CHECK(geo(Point(5, 0, 0, 0)) == doctest::Approx(10.0));
    const HamiltonJacobiField proj = load_field(json{{"kind", "projectile"}, {"s", 2.0}});
    CHECK(gradient(proj, Point::Zero())[2] == doctest::Approx(0.0));
    const HamiltonJacobiField pw = load_field(json{{"kind", "plane-wave"}, {"p", {3, 4, 0}}});
    CHECK(hamiltonian(pw, Point::Zero()) == doctest::Approx(5.0));
    const HamiltonJacobiField poly =
        load_field(json::parse(R"({"kind": "custom-polynomial", "terms": [{"coef": 3, "powers": [0,1,0,0]}]})"));
    CHECK(gradient(poly, Point::Zero())[1] == 3.0);
  }
  SUBCASE("bad descriptions") {
    const std::vector<json> bad{
        json{{"kind", "minkowski"}, {"extra", 1}},
        json{{"kind", "warp"}},
        json{{"kind", "diagonal"}, {"diag", {1, 2}}},
        json::parse(R"({"kind": "custom-polynomial", "components": {"10": []}})"),
        json::parse(R"({"kind": "custom-polynomial", "components": {"00": [{"coef": 1, "powers": [1]}]}})"),
    };
    for (const auto& spec : bad) {
      try {
        load_metric(spec);
        FAIL("accepted " << spec.dump());
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
      }
    }
    CHECK_THROWS_AS(load_chart(json{{"kind", "rescaled-time"}, {"factor", 0}}), Error);
    CHECK_THROWS_AS(load_field(json{{"kind", "geodesic"}, {"mass", 1}}), Error);
    CHECK_THROWS_AS(load_field(json{{"kind", "plane-wave"}}), Error);
  }
}

TEST_CASE("report serialization") {
  CHECK(to_json(FourVector(1, 2, 3, 4)) == json({1.0, 2.0, 3.0, 4.0}));
  HJReport r;
  r.pass = true;
  r.loops.push_back({});
  const json j = to_json(r);
  CHECK(j["pass"] == true);
  CHECK(j.contains("closedness_residual"));
  CHECK(j["loops"].size() == 1);

  LieTransportReport l;
  l.verdict = Verdict::BothFail;
  CHECK(to_json(l)["verdict"] == "both_fail");

  const PartitionTable t = partition_enumerate({0, 1}, 1, 1.0, Statistics::BoseEinstein);
  CHECK(to_json(t)["states"].size() == 2);
}
