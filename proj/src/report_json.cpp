#include "hjdirac/report_json.hpp"

namespace hjdirac {

using nlohmann::json;

json to_json(const FourVector& v) { return json::array({v[0], v[1], v[2], v[3]}); }
json to_json(const Covector& v) { return json::array({v[0], v[1], v[2], v[3]}); }

json to_json(const HJReport& r) {
  json loops = json::array();
  for (const auto& l : r.loops) {
    loops.push_back({{"plane", json::array({l.axis_a, l.axis_b})},
                     {"corner", json::array({l.corner[0], l.corner[1], l.corner[2], l.corner[3]})},
                     {"sides", json::array({l.side_a, l.side_b})},
                     {"area", l.area()},
                     {"integral", l.integral},
                     {"scale", l.scale}});
  }
  json j = {{"closedness_residual", r.closedness_residual},
            {"closedness_tol", r.closedness_tol},
            {"max_loop_integral", r.max_loop_integral},
            {"max_loop_ratio", r.max_loop_ratio},
            {"loop_tol", r.loop_tol},
            {"loops", loops},
            {"pass", r.pass},
            {"verdict", r.pass ? "pass" : "fail"}};
  if (r.mass_shell_residual) {
    j["mass_shell_residual"] = *r.mass_shell_residual;
    j["mass_shell_tol"] = r.mass_shell_tol.value_or(0.0);
  }
  return j;
}

json to_json(const ScaleReport& r) {
  json j = {{"forward", to_json(r.forward)},
            {"monotone", r.monotone},
            {"pass", r.pass},
            {"verdict", r.pass ? "pass" : "fail"}};
  if (r.inverse) {
    j["inverse"] = to_json(*r.inverse);
    j["inverse_recovery"] = r.inverse_recovery;
  } else {
    j["inverse"] = "skipped: NonMonotone";
  }
  return j;
}

json to_json(const LieTransportReport& r) {
  json j = {{"lie_residual", r.lie_residual},
            {"commutator_norm", r.commutator_norm},
            {"eigen_residual", r.eigen_residual},
            {"verdict", to_string(r.verdict)},
            {"lie_pass", r.lie_pass},
            {"dirac_pass", r.dirac_pass},
            {"raw_commutator_norm", r.raw_commutator_norm},
            {"used_parallel_part", r.used_parallel_part}};
  if (r.spin) j["spin"] = to_json(*r.spin);
  return j;
}

json to_json(const MomentReport& r) {
  json axes = json::array();
  for (const auto& a : r.axes) {
    axes.push_back({{"mean", a.mean},
                    {"variance", a.variance},
                    {"excess_kurtosis", a.excess_kurtosis},
                    {"se_mean", a.se_mean},
                    {"se_variance", a.se_variance},
                    {"se_kurtosis", a.se_kurtosis}});
  }
  return {{"n", r.n}, {"expected_variance", r.expected_variance}, {"axes", axes}, {"max_z", r.max_z()}};
}

json to_json(const EigenSolutionReport& r) {
  return {{"psi_prime_residual", r.psi_prime_residual},
          {"chain_residual", r.chain_residual},
          {"flipped_sign_residual", r.flipped_residual},
          {"psi_variation", r.psi_variation},
          {"interior_samples", r.interior_samples},
          {"sign_convention", "dpsi/ds = +k psi (pdot.p), chain rule on psi(p.p/2)"}};
}

json to_json(const PartitionTable& t) {
  json states = json::array();
  for (const auto& s : t.states) {
    states.push_back({{"occupation", s.occupation}, {"energy", s.energy}, {"probability", s.probability}});
  }
  return {{"Z", t.Z}, {"states", states}};
}

}  // namespace hjdirac
