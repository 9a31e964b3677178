#include "hjdirac/cli/cli.hpp"

#include "hjdirac/dynamics.hpp"
#include "hjdirac/error.hpp"
#include "hjdirac/report_json.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace hjdirac::cli {
namespace {

using nlohmann::json;

struct Run {
  Trajectory trajectory;
  std::vector<Point> cartesian;  // covariant runs only
  json diagnostics = json::object();
};

FourVector vec4(const std::vector<double>& v) { return FourVector(v[0], v[1], v[2], v[3]); }

Run run_model(const SimulateSettings& sim) {
  const Integrator method = sim.method == "leapfrog" ? Integrator::Leapfrog : Integrator::RK4;
  const FourVector origin = vec4(sim.origin);
  Run run;

  if (sim.model == "covariant-polar") {
    // Chart coordinates (t, r, theta, z); default launch is tangential at r = 1.
    PhaseState start{origin, FourVector(std::sqrt(1.25), 0.0, 0.5, 0.0), 0.0};
    if (start.x[1] <= 0.0) start.x[1] = 1.0;
    if (!sim.momentum.empty()) start.p = vec4(sim.momentum);
    CovariantModel cm;
    cm.m0 = sim.m0;
    const CoordinateChart chart = CoordinateChart::polar();
    const CovariantTrajectory ct =
        covariant_integrate(MetricField::polar(), chart, cm, start, sim.s_end, sim.step);
    const Eigen::Vector4d v0 = chart.jacobian(start.x.vec()) * start.p.vec() / sim.m0;
    const Point x0 = chart.to_cartesian(start.x.vec());
    double straight = 0.0;
    for (std::size_t k = 0; k < ct.cartesian.size(); ++k) {
      const Point expected = x0 + (ct.chart.samples[k].s - start.s) * v0;
      straight = std::max(straight, (ct.cartesian[k] - expected).cwiseAbs().maxCoeff());
    }
    run.trajectory = ct.chart;
    run.cartesian = ct.cartesian;
    run.diagnostics["oracle"] = {{"kind", "cartesian straight line"}, {"max_deviation", straight}};
    run.diagnostics["K_drift"] = ct.K_drift;
    return run;
  }

  HamiltonianModel model;
  PhaseState start{origin, FourVector(), 0.0};
  if (sim.model == "projectile" || sim.model == "projectile-relativistic") {
    model = sim.model == "projectile" ? HamiltonianModel::projectile_arclength(sim.m0, sim.g)
                                      : HamiltonianModel::projectile(sim.m0, sim.g);
    start = projectile_launch(model, sim.ux, sim.uy, origin.vec());
  } else if (sim.model == "free") {
    model = HamiltonianModel::free(sim.m0);
    start.p = FourVector(std::hypot(sim.m0, std::hypot(sim.ux, sim.uy)), sim.ux, sim.uy, 0.0);
  } else if (sim.model == "quadratic") {
    model = HamiltonianModel::quadratic();
    start.p = FourVector(std::sqrt(1.0 + sim.ux * sim.ux + sim.uy * sim.uy), sim.ux, sim.uy, 0.0);
  } else if (sim.model == "harmonic") {
    model = HamiltonianModel::harmonic();
    if (start.x[1] == 0.0) start.x[1] = 1.0;
  } else if (sim.model == "dilation") {
    model = HamiltonianModel::dilation(sim.rate);
    start.p = FourVector(1.2, 0.4, 0.1, 0.0);
  } else {
    throw UsageError("unknown model '" + sim.model +
                     "' (projectile, projectile-relativistic, free, quadratic, harmonic, dilation, covariant-polar)");
  }
  if (!sim.momentum.empty()) start.p = vec4(sim.momentum);

  run.trajectory = integrate(model, start, sim.s_end, sim.step, method);
  const auto& samples = run.trajectory.samples;
  if (sim.model == "projectile") {
    double dy = 0.0;
    for (const auto& st : samples) {
      const double s = st.s - start.s;
      dy = std::max(dy, std::abs(st.x[2] - (start.x[2] + sim.uy * s - 0.5 * sim.g * s * s)));
    }
    run.diagnostics["oracle"] = {{"kind", "y = y0 + u_y s - g s^2 / 2"}, {"max_deviation", dy}};
  } else if (sim.model == "projectile-relativistic") {
    double dx = 0.0;
    for (const auto& st : samples) {
      const PhaseState exact = projectile_exact(sim.m0, sim.g, start, st.s);
      dx = std::max({dx, (st.x.vec() - exact.x.vec()).cwiseAbs().maxCoeff(),
                     (st.p.vec() - exact.p.vec()).cwiseAbs().maxCoeff()});
    }
    run.diagnostics["oracle"] = {{"kind", "exact flow"}, {"max_deviation", dx}};
  }
  run.diagnostics["model"] = to_string(model.kind);
  return run;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os << "s,x0,x1,x2,x3,p0,p1,p2,p3,H,dm_ds,comm_norm\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& st = t.samples[k];
    os << format_number(st.s);
    for (int a = 0; a < 4; ++a) os << ',' << format_number(st.x[a]);
    for (int a = 0; a < 4; ++a) os << ',' << format_number(st.p[a]);
    os << ',' << format_number(t.H[k]) << ',' << format_number(t.dm_ds[k]) << ','
       << format_number(t.comm_norm[k]) << '\n';
  }
  return os.str();
}

json trajectory_json(const Trajectory& t) {
  json rows = json::array();
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& st = t.samples[k];
    rows.push_back({{"s", st.s},
                    {"x", {st.x[0], st.x[1], st.x[2], st.x[3]}},
                    {"p", {st.p[0], st.p[1], st.p[2], st.p[3]}},
                    {"H", t.H[k]},
                    {"dm_ds", t.dm_ds[k]},
                    {"comm_norm", t.comm_norm[k]}});
  }
  return {{"schema_version", kSchemaVersion}, {"samples", rows}};
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SimulateSettings& sim = cfg.simulate;
  Run run;
  try {
    run = run_model(sim);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    err << "error: integration failed: " << e.what() << "\n";
    return kCheckFailed;
  }

  const auto& dir = *cfg.out_dir;
  std::string data_name;
  if (cfg.format == "json") {
    data_name = "trajectory.json";
    write_atomic(dir / data_name, dump_json(trajectory_json(run.trajectory)));
  } else {
    data_name = "trajectory.csv";
    write_atomic(dir / data_name, trajectory_csv(run.trajectory));
  }

  double max_comm = 0.0;
  for (double c : run.trajectory.comm_norm) max_comm = std::max(max_comm, c);
  json sidecar;
  sidecar["schema_version"] = kSchemaVersion;
  sidecar["command"] = "simulate";
  sidecar["effective_config"] = cfg.effective();
  sidecar["data_file"] = data_name;
  sidecar["samples"] = run.trajectory.size();
  sidecar["energy_drift"] = run.trajectory.energy_drift;
  sidecar["max_comm_norm"] = max_comm;
  sidecar["diagnostics"] = run.diagnostics;
  sidecar["conventions"] = {
      {"metric", "diag(+1, -1, -1, -1)"},
      {"comm_norm", "|[slash p, slash pdot]|_F"},
      {"dm_ds", "sqrt(|eta pdot pdot|)"},
      {"chart", sim.model == "covariant-polar" ? "rows are (t, r, theta, z); diagnostics in tetrad components"
                                               : "tetrad coordinates"}};
  write_atomic(dir / "simulate.json", dump_json(sidecar));

  out << "wrote " << (dir / data_name).string() << " (" << run.trajectory.size() << " samples)\n";
  return kOk;
}

}  // namespace hjdirac::cli
