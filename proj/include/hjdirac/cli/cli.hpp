#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hjdirac::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

// Thrown for anything that should end in exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  std::map<std::string, double> values;

  static Tolerances defaults();
  double operator[](const std::string& name) const;
  // "NAME=VALUE"; unknown names and unparsable values are usage errors.
  void apply_override(const std::string& assignment);
  nlohmann::json to_json() const;
};

struct VerifySettings {
  double step = 1e-3;         // integrator step for the projectile oracles
  double ratio_step = 0.1;    // coarse step for the step-halving ratio
  int loops = 6;
  int segments = 10000;
  int samples = 32;
  std::size_t ensemble_n = 1000000;
  std::optional<nlohmann::json> metric;
  std::optional<nlohmann::json> chart;
  std::optional<nlohmann::json> field;
};

struct SimulateSettings {
  std::string model = "projectile";
  double m0 = 1.0;
  double g = 1.0;
  double ux = 1.0;
  double uy = 2.0;
  double rate = 0.5;
  double s_end = 2.0;
  double step = 1e-3;
  std::string method = "rk4";
  std::vector<double> origin{0.0, 0.0, 0.0, 0.0};
  std::vector<double> momentum{};  // overrides the model's launch momentum
};

struct EnsembleSettings {
  std::size_t n = 100000;
  double m0 = 1.0;
  double T = 2.0;
  double kB = 1.0;
  int bins = 40;
  double range_sigma = 5.0;
  std::optional<std::string> statistics;  // "BE", "FD" or "MB"
  std::vector<double> levels{0.0, 1.0};
  int particles = 2;
  double beta = 1.0;
};

struct RunConfig {
  std::string command;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::filesystem::path> out_dir;
  std::uint64_t seed = 12345;
  std::string suite = "all";
  std::string format = "csv";
  Tolerances tol = Tolerances::defaults();
  VerifySettings verify;
  SimulateSettings simulate;
  EnsembleSettings ensemble;

  // Everything that determines the outputs, echoed into reports and sidecars.
  nlohmann::json effective() const;
};

// Reads the JSON config into cfg; unknown keys are usage errors.
void load_config_file(const std::filesystem::path& path, RunConfig& cfg);

// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
// printf "%.17g", enough digits to round-trip a double.
std::string format_number(double v);
std::string dump_json(const nlohmann::json& j);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_ensemble(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hjdirac::cli
