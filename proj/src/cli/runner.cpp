#include "anovel/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "anovel/cli/presets.hpp"
#include "anovel/errors.hpp"
#include "anovel/leakage.hpp"

namespace anovel::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string scan_unit(const std::string& parameter) {
  if (parameter.ends_with("_mhz")) return "MHz";
  if (parameter.ends_with("_s")) return "s";
  return "";
}

struct PointResult {
  bool ok = false;
  Observables final;
  double mean_total = kNaN;
  ConvergenceCertificate certificate;
  InvariantReport invariants;
  std::string error;
};

double time_average(const std::vector<double>& t, const std::vector<double>& y) {
  double area = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) area += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  return area / (t.back() - t.front());
}

Trajectory run_trajectory(const RunConfig& config) {
  const SystemSpec spec = config.system.to_spec();
  const SweepSchedule schedule = config.schedule.to_schedule(spec.omega_0n);
  return propagate(spec, schedule, initial_state(spec, config.schedule.initial_axis()),
                   propagate_options(config.integrator, config.integrator.samples));
}

ResultTable trajectory_table(const RunConfig& config) {
  const SystemSpec spec = config.system.to_spec();
  const SweepSchedule schedule = config.schedule.to_schedule(spec.omega_0n);
  const Trajectory traj = run_trajectory(config);

  std::vector<Column> cols{{"t", "s"}, {"electron_x", ""}, {"electron_y", ""}, {"electron_z", ""}};
  for (const auto& n : spec.nuclei) cols.push_back({"P_" + n.label, ""});
  cols.push_back({"P_total", ""});
  ResultTable table(std::move(cols));
  for (std::size_t i = 0; i < traj.times.size(); i += config.output.stride) {
    const Observables& o = traj.observables[i];
    std::vector<double> row{traj.times[i], o.electron_x, o.electron_y, o.electron_z};
    row.insert(row.end(), o.nuclear_z.begin(), o.nuclear_z.end());
    row.push_back(o.total_nuclear());
    table.add_row(std::move(row));
  }

  auto& meta = table.metadata();
  meta["certificate"] = certificate_json(traj.certificate);
  meta["invariants"] = invariants_json(traj.invariants);
  meta["final_total"] = traj.final().total_nuclear();
  meta["mean_total"] = time_average(traj.times, traj.total_nuclear());
  if (config.system.b0_t && config.system.temperature_k) {
    meta["p_e"] = thermal_polarization(kProtonConstants.gamma_e * *config.system.b0_t, *config.system.temperature_k);
    meta["p_n"] = thermal_polarization(kProtonConstants.gamma_n * *config.system.b0_t, *config.system.temperature_k);
  }
  if (schedule.kind() == ScheduleKind::LinearSweep) {
    const auto t_star = crossing_time(spec.delta_omega0, schedule, spec.omega_0n);
    meta["crossing_time_s"] = t_star ? ordered_json(*t_star) : ordered_json(nullptr);
  }
  if (schedule.kind() == ScheduleKind::AHP) {
    meta["min_sweep_time_s"] = min_sweep_time(from_mhz(config.schedule.alpha_mhz),
                                              from_mhz(config.schedule.omega_1max_mhz) * config.schedule.scale);
    const double margin = adiabaticity_margin(schedule, spec.delta_omega0);
    meta["adiabaticity_margin"] = std::isfinite(margin) ? ordered_json(margin) : ordered_json(nullptr);
  }
  return table;
}

PointResult evaluate_point(const RunConfig& config) {
  PointResult r;
  try {
    validate(config);
    const Trajectory traj = run_trajectory(config);
    r.final = traj.final();
    r.mean_total = time_average(traj.times, traj.total_nuclear());
    r.certificate = traj.certificate;
    r.invariants = traj.invariants;
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

void apply_overrides(RunConfig& config, const Overrides& o) {
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw ValidationError("--tol", "must be positive");
    config.integrator.tol = *o.tol;
  }
  if (o.steps) {
    if (*o.steps < 2) throw ValidationError("--steps", "must be at least 2");
    config.integrator.steps = *o.steps;
  }
  if (o.format) config.output.format = *o.format;
  if (o.out) config.output.path = *o.out;
}

PropagateOptions propagate_options(const IntegratorConfig& integrator, std::size_t samples, bool store_states) {
  PropagateOptions p;
  p.n_steps = integrator.steps;
  p.tol = integrator.tol;
  p.n_samples = samples;
  p.max_refinements = integrator.max_refinements;
  p.store_states = store_states;
  return p;
}

ordered_json certificate_json(const ConvergenceCertificate& c) {
  return {{"steps", c.steps}, {"refinements", c.refinements}, {"max_change", c.max_change}, {"tol", c.tol}};
}

ordered_json invariants_json(const InvariantReport& r) {
  return {{"max_trace_error", r.max_trace_error},
          {"max_hermiticity_error", r.max_hermiticity_error},
          {"min_eigenvalue", r.min_eigenvalue},
          {"max_purity_drift", r.max_purity_drift}};
}

void stamp_metadata(ResultTable& table, const RunConfig& config) {
  ordered_json stamped;
  stamped["config_hash"] = config_hash(config);
  stamped["preset"] = config.preset ? ordered_json(*config.preset) : ordered_json(nullptr);
  stamped["integrator"] = {{"tol", config.integrator.tol},
                           {"steps", config.integrator.steps},
                           {"samples", config.integrator.samples},
                           {"max_refinements", config.integrator.max_refinements}};
  for (const auto& [key, value] : table.metadata().items()) stamped[key] = value;
  table.metadata() = std::move(stamped);
}

ResultTable run(const RunConfig& config) {
  if (config.scan) return scan(config);
  ResultTable table;
  if (config.preset) {
    table = run_preset(*config.preset, config.integrator);
  } else {
    validate(config);
    table = trajectory_table(config);
  }
  stamp_metadata(table, config);
  return table;
}

ResultTable scan(const RunConfig& config, std::size_t threads) {
  if (!config.scan) throw ValidationError("scan", "required for a scan");
  validate(config);
  const ScanConfig& sc = *config.scan;
  const std::size_t n = sc.grid.size();

  std::vector<PointResult> results(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      RunConfig point = config;
      point.scan.reset();
      apply_scan_value(point, sc, sc.grid[i]);
      results[i] = evaluate_point(point);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  const SystemSpec spec = config.system.to_spec();
  std::vector<Column> cols{{sc.parameter, scan_unit(sc.parameter)}, {"ok", ""}, {"electron_x", ""},
                           {"electron_y", ""}, {"electron_z", ""}};
  for (const auto& nucleus : spec.nuclei) cols.push_back({"P_" + nucleus.label, ""});
  cols.push_back({"P_total", ""});
  cols.push_back({"P_total_mean", ""});
  ResultTable table(std::move(cols));

  ordered_json certificates = ordered_json::array();
  ordered_json errors = ordered_json::array();
  InvariantReport worst;
  worst.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const PointResult& r = results[i];
    std::vector<double> row{sc.grid[i], r.ok ? 1.0 : 0.0};
    if (r.ok) {
      row.insert(row.end(), {r.final.electron_x, r.final.electron_y, r.final.electron_z});
      row.insert(row.end(), r.final.nuclear_z.begin(), r.final.nuclear_z.end());
      row.push_back(r.final.total_nuclear());
      row.push_back(r.mean_total);
      certificates.push_back(certificate_json(r.certificate));
      worst.merge(r.invariants);
    } else {
      row.resize(table.columns().size(), kNaN);
      certificates.push_back(nullptr);
      errors.push_back({{"index", i}, {"value", sc.grid[i]}, {"error", r.error}});
    }
    table.add_row(std::move(row));
  }
  auto& meta = table.metadata();
  meta["scan_parameter"] = sc.parameter;
  meta["certificates"] = std::move(certificates);
  if (errors.size() < n) meta["invariants"] = invariants_json(worst);
  meta["errors"] = std::move(errors);
  stamp_metadata(table, config);
  return table;
}

}  // namespace anovel::cli
