#include "hjdirac/cli/cli.hpp"

#include "hjdirac/error.hpp"
#include "hjdirac/loaders.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hjdirac::cli {
namespace {

using nlohmann::json;

void known_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  try {
    reject_unknown_keys(obj, allowed, where);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

template <class T>
void read(const json& obj, const char* key, T& target, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    target = obj[key].get<T>();
  } catch (const json::exception&) {
    throw UsageError("config value " + where + "." + key + " has the wrong type");
  }
}

void read_positive(const json& obj, const char* key, double& target, const std::string& where) {
  read(obj, key, target, where);
  if (obj.contains(key) && !(target > 0.0)) throw UsageError(where + "." + key + " must be positive");
}

}  // namespace

Tolerances Tolerances::defaults() {
  Tolerances t;
  t.values = {
      {"clifford.anticommutator", 1e-12},
      {"clifford.square", 1e-12},
      {"clifford.eigen", 1e-10},
      {"clifford.reconstruction", 1e-12},
      {"geometry.tetrad", 1e-10},
      {"geometry.christoffel", 1e-6},
      {"geometry.compatibility", 1e-6},
      {"geometry.clifford", 1e-10},
      {"hj.closed", 1e-6},
      {"hj.loop", 1e-8},
      {"hj.shell", 1e-8},
      {"hj.green", 0.01},
      {"dirac.plane", 1e-10},
      {"dirac.eigen", 1e-10},
      {"dirac.lie", 1e-6},
      {"dirac.commutator", 1e-8},
      {"dynamics.oracle", 1e-9},
      {"dynamics.ratio_lo", 12.0},
      {"dynamics.ratio_hi", 20.0},
      {"dynamics.chart", 1e-6},
      {"dynamics.drift", 1e-8},
      {"dynamics.commutator", 1e-12},
      {"dynamics.noncommuting", 1e-3},
      {"statmech.se", 3.0},
      {"statmech.ratio", 0.02},
      {"statmech.combinatorial", 1e-12},
      {"statmech.slice", 1e-6},
  };
  return t;
}

double Tolerances::operator[](const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end()) throw std::logic_error("no tolerance named " + name);
  return it->second;
}

void Tolerances::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--tol expects NAME=VALUE, got '" + assignment + "'");
  const std::string name = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  const auto it = values.find(name);
  if (it == values.end()) throw UsageError("unknown tolerance '" + name + "'");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(v >= 0.0)) {
    throw UsageError("tolerance '" + name + "' needs a non-negative number, got '" + text + "'");
  }
  it->second = v;
}

json Tolerances::to_json() const {
  json j = json::object();
  for (const auto& [k, v] : values) j[k] = v;
  return j;
}

json RunConfig::effective() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["tolerances"] = tol.to_json();
  if (command == "verify") {
    j["suite"] = suite;
    json v = {{"step", verify.step},           {"ratio_step", verify.ratio_step},
              {"loops", verify.loops},         {"segments", verify.segments},
              {"samples", verify.samples},     {"ensemble_n", verify.ensemble_n}};
    if (verify.metric) v["metric"] = *verify.metric;
    if (verify.chart) v["chart"] = *verify.chart;
    if (verify.field) v["field"] = *verify.field;
    j["verify"] = v;
  } else if (command == "simulate") {
    j["format"] = format;
    j["simulate"] = {{"model", simulate.model}, {"m0", simulate.m0},       {"g", simulate.g},
                     {"ux", simulate.ux},       {"uy", simulate.uy},       {"rate", simulate.rate},
                     {"s_end", simulate.s_end}, {"step", simulate.step},   {"method", simulate.method},
                     {"origin", simulate.origin}, {"momentum", simulate.momentum}};
  } else if (command == "ensemble") {
    j["format"] = format;
    json e = {{"n", ensemble.n},         {"m0", ensemble.m0},     {"T", ensemble.T},
              {"kB", ensemble.kB},       {"bins", ensemble.bins}, {"range_sigma", ensemble.range_sigma},
              {"levels", ensemble.levels}, {"particles", ensemble.particles}, {"beta", ensemble.beta}};
    e["statistics"] = ensemble.statistics ? json(*ensemble.statistics) : json(nullptr);
    j["ensemble"] = e;
  }
  return j;
}

void load_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!root.is_object()) throw UsageError("config root must be a JSON object");
  known_keys(root, {"schema_version", "seed", "verify", "simulate", "ensemble"}, "config");
  if (root.contains("schema_version")) {
    int version = 0;
    read(root, "schema_version", version, "config");
    if (version != kSchemaVersion) {
      throw UsageError("config schema_version " + std::to_string(version) + " is not supported");
    }
  }
  read(root, "seed", cfg.seed, "config");

  if (root.contains("verify")) {
    const json& v = root["verify"];
    known_keys(v, {"step", "ratio_step", "loops", "segments", "samples", "ensemble_n", "metric", "chart", "field"},
               "verify");
    read_positive(v, "step", cfg.verify.step, "verify");
    read_positive(v, "ratio_step", cfg.verify.ratio_step, "verify");
    read(v, "loops", cfg.verify.loops, "verify");
    read(v, "segments", cfg.verify.segments, "verify");
    read(v, "samples", cfg.verify.samples, "verify");
    read(v, "ensemble_n", cfg.verify.ensemble_n, "verify");
    if (cfg.verify.loops < 1 || cfg.verify.segments < 4 || cfg.verify.samples < 1 || cfg.verify.ensemble_n < 2) {
      throw UsageError("verify needs loops >= 1, segments >= 4, samples >= 1, ensemble_n >= 2");
    }
    // Parse now so that malformed descriptions fail as usage errors.
    try {
      if (v.contains("metric")) {
        load_metric(v["metric"]);
        cfg.verify.metric = v["metric"];
      }
      if (v.contains("chart")) {
        load_chart(v["chart"]);
        cfg.verify.chart = v["chart"];
      }
      if (v.contains("field")) {
        load_field(v["field"]);
        cfg.verify.field = v["field"];
      }
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }

  if (root.contains("simulate")) {
    const json& s = root["simulate"];
    known_keys(s, {"model", "m0", "g", "ux", "uy", "rate", "s_end", "step", "method", "origin", "momentum"},
               "simulate");
    auto& sim = cfg.simulate;
    read(s, "model", sim.model, "simulate");
    read(s, "m0", sim.m0, "simulate");
    read(s, "g", sim.g, "simulate");
    read(s, "ux", sim.ux, "simulate");
    read(s, "uy", sim.uy, "simulate");
    read(s, "rate", sim.rate, "simulate");
    read_positive(s, "s_end", sim.s_end, "simulate");
    read_positive(s, "step", sim.step, "simulate");
    read(s, "method", sim.method, "simulate");
    read(s, "origin", sim.origin, "simulate");
    read(s, "momentum", sim.momentum, "simulate");
    if (sim.origin.size() != 4) throw UsageError("simulate.origin needs 4 components");
    if (!sim.momentum.empty() && sim.momentum.size() != 4) throw UsageError("simulate.momentum needs 4 components");
    if (sim.method != "rk4" && sim.method != "leapfrog") throw UsageError("simulate.method must be rk4 or leapfrog");
  }

  if (root.contains("ensemble")) {
    const json& e = root["ensemble"];
    known_keys(e, {"n", "m0", "T", "kB", "bins", "range_sigma", "statistics", "levels", "particles", "beta"},
               "ensemble");
    auto& ens = cfg.ensemble;
    read(e, "n", ens.n, "ensemble");
    read_positive(e, "m0", ens.m0, "ensemble");
    read_positive(e, "T", ens.T, "ensemble");
    read_positive(e, "kB", ens.kB, "ensemble");
    read(e, "bins", ens.bins, "ensemble");
    read_positive(e, "range_sigma", ens.range_sigma, "ensemble");
    if (e.contains("statistics")) {
      std::string stats;
      read(e, "statistics", stats, "ensemble");
      if (stats != "BE" && stats != "FD" && stats != "MB") {
        throw UsageError("ensemble.statistics must be BE, FD or MB");
      }
      ens.statistics = stats;
    }
    read(e, "levels", ens.levels, "ensemble");
    read(e, "particles", ens.particles, "ensemble");
    read(e, "beta", ens.beta, "ensemble");
    if (ens.n < 2 || ens.bins < 1) throw UsageError("ensemble needs n >= 2 and bins >= 1");
  }
}

}  // namespace hjdirac::cli
