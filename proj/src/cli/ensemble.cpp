#include "hjdirac/cli/cli.hpp"

#include "hjdirac/report_json.hpp"
#include "hjdirac/stat_mech.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace hjdirac::cli {
namespace {

using nlohmann::json;

Statistics parse_statistics(const std::string& s) {
  if (s == "BE") return Statistics::BoseEinstein;
  if (s == "FD") return Statistics::FermiDirac;
  return Statistics::Distinguishable;
}

std::string state_label(const std::vector<int>& occupation) {
  std::string label;
  for (std::size_t i = 0; i < occupation.size(); ++i) {
    if (i) label += ':';
    label += std::to_string(occupation[i]);
  }
  return label;
}

// Pooled over the three axes; predicted counts from the Gaussian CDF.
std::string histogram_csv(const VelocitySample& sample, double variance, int bins, double range_sigma) {
  const double sigma = std::sqrt(variance);
  const double lo = -range_sigma * sigma;
  const double width = 2.0 * range_sigma * sigma / bins;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (const auto& v : sample.v) {
    for (int a = 0; a < 3; ++a) {
      const double b = std::floor((v[a] - lo) / width);
      if (b >= 0.0 && b < bins) ++counts[static_cast<std::size_t>(b)];
    }
  }
  const double total = 3.0 * static_cast<double>(sample.v.size());
  const auto cdf = [sigma](double x) { return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0))); };
  std::ostringstream os;
  os << "bin_lo,bin_hi,count,predicted\n";
  for (int b = 0; b < bins; ++b) {
    const double a0 = lo + b * width;
    const double a1 = lo + (b + 1) * width;
    os << format_number(a0) << ',' << format_number(a1) << ',' << counts[static_cast<std::size_t>(b)] << ','
       << format_number(total * (cdf(a1) - cdf(a0))) << '\n';
  }
  return os.str();
}

}  // namespace

int cmd_ensemble(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const EnsembleSettings& es = cfg.ensemble;
  EnsembleConfig ec;
  ec.n = es.n;
  ec.m0 = es.m0;
  ec.T = es.T;
  ec.kB = es.kB;
  ec.seed = cfg.seed;
  ec.validate();

  const VelocitySample sample = sample_mb(ec);
  const MomentReport mr = moments(sample, ec.axis_variance());
  const auto& dir = *cfg.out_dir;

  std::string samples_name;
  if (cfg.format == "json") {
    samples_name = "samples.json";
    json rows = json::array();
    for (std::size_t i = 0; i < sample.v.size(); ++i) {
      rows.push_back({i, sample.v[i][0], sample.v[i][1], sample.v[i][2], sample.eps[i]});
    }
    write_atomic(dir / samples_name, dump_json({{"schema_version", kSchemaVersion},
                                                {"columns", {"index", "vx", "vy", "vz", "eps"}},
                                                {"rows", rows}}));
  } else {
    samples_name = "samples.csv";
    std::string text = "index,vx,vy,vz,eps\n";
    text.reserve(sample.v.size() * 100);
    for (std::size_t i = 0; i < sample.v.size(); ++i) {
      text += std::to_string(i);
      for (int a = 0; a < 3; ++a) text += ',' + format_number(sample.v[i][a]);
      text += ',' + format_number(sample.eps[i]) + '\n';
    }
    write_atomic(dir / samples_name, text);
  }
  write_atomic(dir / "histogram.csv", histogram_csv(sample, ec.axis_variance(), es.bins, es.range_sigma));

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "ensemble";
  report["effective_config"] = cfg.effective();
  report["samples_file"] = samples_name;
  report["moments"] = to_json(mr);
  report["max_z"] = mr.max_z();
  report["z_limit"] = 4.0;

  if (es.statistics) {
    const PartitionTable table = partition_enumerate(es.levels, es.particles, es.beta, parse_statistics(*es.statistics));
    std::string text = "state,energy,probability\n";
    for (const auto& st : table.states) {
      text += state_label(st.occupation) + ',' + format_number(st.energy) + ',' + format_number(st.probability) + '\n';
    }
    write_atomic(dir / "occupancy.csv", text);
    report["occupancy"] = {{"statistics", *es.statistics}, {"states", table.states.size()}, {"Z", table.Z}};
  }

  const bool ok = mr.max_z() <= 4.0;
  report["pass"] = ok;
  write_atomic(dir / "moments.json", dump_json(report));

  out << "variance per axis: " << format_number(mr.axes[0].variance) << ' ' << format_number(mr.axes[1].variance)
      << ' ' << format_number(mr.axes[2].variance) << " (expected " << format_number(ec.axis_variance()) << ")\n";
  if (!ok) {
    err << "moment test failed: max z = " << format_number(mr.max_z()) << " > 4\n";
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace hjdirac::cli
