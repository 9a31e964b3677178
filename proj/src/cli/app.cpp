#include "hjdirac/cli/cli.hpp"

#include "hjdirac/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

namespace hjdirac::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification suites, simulations and ensembles for the metric/Dirac toolkit", "hjdirac"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> tol_overrides;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "generator seed");
    sub->add_option("--tol", tol_overrides, "tolerance override NAME=VALUE")->take_all();
    sub->add_option("--format", cfg.format, "tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* verify = app.add_subcommand("verify", "run invariant suites and report pass/fail");
  add_common(verify);
  verify->add_option("--suite", cfg.suite, "suite name")
      ->check(CLI::IsMember({"clifford", "geometry", "hj", "dirac", "dynamics", "statmech", "all"}));
  CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory");
  add_common(simulate);
  CLI::App* ensemble = app.add_subcommand("ensemble", "sample a Maxwell-Boltzmann ensemble");
  add_common(ensemble);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (verify->parsed()) cfg.command = "verify";
    if (simulate->parsed()) cfg.command = "simulate";
    if (ensemble->parsed()) cfg.command = "ensemble";
    if (!config_path.empty()) {
      cfg.config_path = config_path;
      load_config_file(config_path, cfg);
    }
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    for (const auto& t : tol_overrides) cfg.tol.apply_override(t);

    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (!cfg.out_dir) throw UsageError(cfg.command + " needs --out DIR");
    if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
    return cmd_ensemble(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidArgument ? kUsage : kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace hjdirac::cli
