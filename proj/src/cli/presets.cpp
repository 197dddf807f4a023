#include "anovel/cli/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "anovel/cli/runner.hpp"
#include "anovel/errors.hpp"
#include "anovel/leakage.hpp"
#include "anovel/propagate.hpp"

namespace anovel::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kB0 = 1.2;            // T
constexpr double kTemperature = 0.3;   // K
constexpr double kShiftLarmorMhz = 51.0;
constexpr double kFamilyLarmorMhz = 50.0;
constexpr double kSweepHalfWidthMhz = 20.0;
constexpr double kSweepTime = 2e-6;

constexpr double kCloudA[] = {4.7, 5.6, -0.059, 1.83343};  // MHz
constexpr double kCloudC[] = {-1.56, 8.8, -0.029, -0.017};
constexpr double kStrongPairKhz = 20.0;
constexpr double kWeakPairKhz = 3.0;

constexpr double kAhpPeakMhz = 150.0;
constexpr double kAhpAlphaMhz = 80.0;
constexpr double kAhpSlowdown = 100.0;
constexpr double kAhpScales[] = {0.6, 1.0, 1.4};

constexpr double kFamilyA[] = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0};
constexpr double kFamilySweeps[] = {0.5e-6, 1e-6, 2e-6};
constexpr double kGridA[] = {0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
constexpr double kGridC[] = {0.0, 0.05, 0.1, 0.2, 0.5, 1.0};
constexpr double kShiftC[] = {0.0, 0.1, 0.5, 1.0};

constexpr double kElectronRate = 1000.0;  // 1/s
constexpr double kBulkRates[] = {100.0, 10.0, 1.0};
constexpr double kOffTime = 3e-3;
constexpr double kRotationTime = 30e-9;
constexpr double kBulkSize = 4e7;

std::string num(double v) { return format_number(v); }

double time_average(const std::vector<double>& t, const std::vector<double>& y) {
  double area = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) area += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  return area / (t.back() - t.front());
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ResultTable run_cloud_comparison(const IntegratorConfig& ig) {
  const std::size_t samples = 201;
  const PropagateOptions opts = propagate_options(ig, samples);
  ResultTable table({{"t", "s"},
                     {"P_adiabatic_k1", ""},
                     {"P_conventional_k1", ""},
                     {"P_adiabatic_k4", ""},
                     {"P_conventional_k4", ""}});
  std::vector<std::vector<double>> series;
  ordered_json summary = ordered_json::object();
  std::vector<double> times;
  for (std::size_t k : {1u, 4u}) {
    const CloudSpec cloud{pinned::cloud(k)};
    for (const auto& [name, schedule] :
         {std::pair{"adiabatic", pinned::cloud_sweep()}, std::pair{"conventional", pinned::cloud_lock()}}) {
      const CloudResult r = simulate_cloud(cloud, schedule, opts);
      times = r.trajectory.times;
      series.push_back(r.trajectory.total_nuclear());
      summary[std::string(name) + "_k" + std::to_string(k)] = {
          {"final_total", r.final_total()},
          {"mean_total", r.time_average_total()},
          {"final_per_nucleus", r.final_per_nucleus()},
          {"certificate", certificate_json(r.trajectory.certificate)},
          {"invariants", invariants_json(r.trajectory.invariants)}};
    }
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    table.add_row({times[i], series[0][i], series[1][i], series[2][i], series[3][i]});
  }
  table.metadata()["omega_0n_mhz"] = to_mhz(kProtonConstants.gamma_n * kB0);
  table.metadata()["summary"] = std::move(summary);
  return table;
}

ResultTable run_sweep_family(const IntegratorConfig& ig) {
  std::vector<Column> cols{{"a_mhz", "MHz"}};
  for (double T : kFamilySweeps) cols.push_back({"P_T" + num(T * 1e6) + "us", ""});
  ResultTable table(std::move(cols));
  const PropagateOptions opts = propagate_options(ig, 2);
  const double w0n = from_mhz(kFamilyLarmorMhz);
  ordered_json certificates = ordered_json::array();
  for (double a : kFamilyA) {
    std::vector<double> row{a};
    for (double T : kFamilySweeps) {
      const SystemSpec spec = SystemSpec::single(w0n, from_mhz(a));
      const auto sweep = SweepSchedule::linear_sweep(w0n, from_mhz(kSweepHalfWidthMhz), T);
      const Trajectory traj = propagate(spec, sweep, initial_state(spec, ElectronAxis::X), opts);
      row.push_back(traj.final().nuclear_z[0]);
      certificates.push_back(certificate_json(traj.certificate));
    }
    table.add_row(std::move(row));
  }
  table.metadata()["omega_0n_mhz"] = kFamilyLarmorMhz;
  table.metadata()["delta_omega_mhz"] = kSweepHalfWidthMhz;
  table.metadata()["certificates"] = std::move(certificates);
  return table;
}

ResultTable run_conventional_grid(const IntegratorConfig& ig) {
  ResultTable table({{"a_rel", ""}, {"c_rel", ""}, {"P_mean", ""}, {"zq_periods", ""}});
  const double w0n = from_mhz(kShiftLarmorMhz);
  const double periods = 10.0;
  const PropagateOptions opts = propagate_options(ig, 20001);
  ordered_json certificates = ordered_json::array();
  for (double a : kGridA) {
    for (double c : kGridC) {
      const SystemSpec spec = SystemSpec::single(w0n, a * w0n, c * w0n);
      // Resonant lock: the C = 0 ZQ oscillation has period pi / Omega_ZQ.
      const BlockModel bm = block_model(w0n, w0n, a * w0n);
      const double duration = periods * std::numbers::pi / bm.Omega_ZQ;
      const auto lock = SweepSchedule::constant_lock(w0n, duration);
      const Trajectory traj = propagate(spec, lock, initial_state(spec, ElectronAxis::X), opts);
      table.add_row({a, c, time_average(traj.times, traj.nuclear(0)), periods});
      certificates.push_back(certificate_json(traj.certificate));
    }
  }
  table.metadata()["omega_0n_mhz"] = kShiftLarmorMhz;
  table.metadata()["certificates"] = std::move(certificates);
  return table;
}

ResultTable run_shift_series(const IntegratorConfig& ig) {
  std::vector<Column> cols{{"t", "s"}};
  for (double c : kShiftC) cols.push_back({"P_C" + num(c), ""});
  ResultTable table(std::move(cols));
  const PropagateOptions opts = propagate_options(ig, 101);
  const auto sweep = pinned::shift_sweep();
  std::vector<std::vector<double>> series;
  std::vector<double> times;
  ordered_json summary = ordered_json::object();
  for (double c : kShiftC) {
    const SystemSpec spec = pinned::shift_system(c, 0.0);
    const Trajectory traj = propagate(spec, sweep, initial_state(spec, ElectronAxis::X), opts);
    times = traj.times;
    series.push_back(traj.nuclear(0));
    summary["C" + num(c)] = {
        {"final", traj.final().nuclear_z[0]},
        {"transfer_midpoint_s", optional_json(transfer_midpoint(traj.times, series.back()))},
        {"crossing_time_s", optional_json(crossing_time(0.5 * spec.nuclei[0].hyperfine.C, sweep, spec.omega_0n))},
        {"certificate", certificate_json(traj.certificate)}};
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (const auto& s : series) row.push_back(s[i]);
    table.add_row(std::move(row));
  }
  table.metadata()["omega_0n_mhz"] = kShiftLarmorMhz;
  table.metadata()["summary"] = std::move(summary);
  return table;
}

ResultTable run_leakage_series() {
  ResultTable table({{"t", "s"},
                     {"omega_1e", "MHz"},
                     {"same_plus", ""},
                     {"same_minus", ""},
                     {"cross_plus_minus", ""},
                     {"cross_minus_plus", ""}});
  const SystemSpec spec = pinned::shift_system(0.0, 0.5);
  const auto sweep = pinned::shift_sweep(SweepDirection::LowToHigh);
  const LeakageTrace trace = leakage_trace(spec, sweep, 201);
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const LeakageRates& r = trace.rates[i];
    table.add_row({trace.times[i], to_mhz(trace.omega_1e[i]), r.same_plus, r.same_minus, r.cross_plus_minus,
                   r.cross_minus_plus});
  }
  table.metadata()["crossing_time_s"] = optional_json(crossing_time(spec.delta_omega0, sweep, spec.omega_0n));
  table.metadata()["direction"] = "low_to_high";
  return table;
}

ResultTable run_repetition(const IntegratorConfig& ig) {
  // One coherent pass of a C = 0 proton sets the per-round transfer. The k = 4
  // cloud's pass is not used: its C terms let the total exceed one quantum.
  const double eta =
      single_pass_efficiency(pinned::shift_system(0.0, 0.0), pinned::shift_sweep(), propagate_options(ig, 2));
  std::vector<Column> cols{{"round", ""}};
  for (double g : kBulkRates) cols.push_back({"P_cloud_ratio" + num(kElectronRate / g), ""});
  for (double g : kBulkRates) cols.push_back({"P_bulk_ratio" + num(kElectronRate / g), ""});
  ResultTable table(std::move(cols));

  std::vector<RepetitionResult> results;
  ordered_json summary = ordered_json::object();
  for (double g : kBulkRates) {
    const RepetitionModel model = pinned::repetition(g, eta);
    results.push_back(repeat_experiment(model, pinned::kRepetitionRounds));
    summary["ratio" + num(kElectronRate / g)] = {{"gamma_1bulk", g},
                                                 {"final_cloud", results.back().P_cloud.back()},
                                                 {"mean_cloud", results.back().mean_cloud}};
  }
  for (std::size_t r = 0; r < pinned::kRepetitionRounds; ++r) {
    std::vector<double> row{static_cast<double>(r + 1)};
    for (const auto& res : results) row.push_back(res.P_cloud[r]);
    for (const auto& res : results) row.push_back(res.P_bulk[r]);
    table.add_row(std::move(row));
  }
  const RepetitionModel base = pinned::repetition(kBulkRates[0], eta);
  table.metadata()["p_e"] = base.p_e;
  table.metadata()["transfer_efficiency"] = eta;
  table.metadata()["gamma_1e"] = kElectronRate;
  table.metadata()["t_cycle_s"] = base.T_cycle();
  table.metadata()["summary"] = std::move(summary);
  return table;
}

ResultTable run_ahp(const IntegratorConfig& ig) {
  ResultTable table({{"scale", ""},
                     {"omega_1max_local", "MHz"},
                     {"tip_from_axis", "deg"},
                     {"tip_from_x", "deg"},
                     {"adiabaticity_margin", ""}});
  const SweepSchedule ahp = pinned::ahp();
  AhpOptions options;
  options.propagate.tol = std::min(ig.tol, options.propagate.tol);
  options.propagate.max_refinements = std::max(ig.max_refinements, options.propagate.max_refinements);
  ordered_json certificates = ordered_json::array();
  for (double s : kAhpScales) {
    const double local = s * from_mhz(kAhpPeakMhz);
    const AhpRotation rot = simulate_ahp_rotation(local, ahp, options);
    const double margin = adiabaticity_margin(ahp.with_amplitude_scale(s), 0.0);
    table.add_row({s, to_mhz(local), rot.tip_from_axis_deg, rot.tip_from_x_deg, margin});
    certificates.push_back(certificate_json(rot.certificate));
  }
  table.metadata()["beta"] = ahp_beta();
  table.metadata()["omega_1max_mhz"] = kAhpPeakMhz;
  table.metadata()["alpha_mhz"] = kAhpAlphaMhz;
  table.metadata()["min_sweep_time_s"] = min_sweep_time(from_mhz(kAhpAlphaMhz), from_mhz(kAhpPeakMhz));
  table.metadata()["t_s_s"] = ahp.duration();
  table.metadata()["certificates"] = std::move(certificates);
  return table;
}

}  // namespace

namespace pinned {

SystemSpec cloud(std::size_t k) {
  if (k < 1 || k > 4) throw DomainError("pinned cloud has 1 to 4 members");
  SystemSpec spec;
  spec.omega_0n = kProtonConstants.gamma_n * kB0;
  spec.omega_0e = kProtonConstants.gamma_e * kB0;
  for (std::size_t i = 0; i < k; ++i) {
    spec.nuclei.push_back(NucleusSpec{HyperfineParams{from_mhz(kCloudA[i]), from_mhz(kCloudC[i]), 0.0},
                                      std::nullopt, 0.0, "H" + std::to_string(i + 1)});
  }
  const auto n = static_cast<Eigen::Index>(k);
  spec.dipolar = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      // Protons 1-2 and 3-4 share a water molecule.
      const bool same_molecule = (i / 2) == (j / 2);
      spec.dipolar(i, j) = from_mhz(1e-3 * (same_molecule ? kStrongPairKhz : kWeakPairKhz));
    }
  }
  return spec;
}

SweepSchedule cloud_sweep() {
  const double w0n = kProtonConstants.gamma_n * kB0;
  return SweepSchedule::linear_sweep(w0n, from_mhz(kSweepHalfWidthMhz), kSweepTime);
}

SweepSchedule cloud_lock() { return SweepSchedule::constant_lock(kProtonConstants.gamma_n * kB0, kSweepTime); }

SystemSpec shift_system(double C_rel, double delta_rel) {
  const double w0n = from_mhz(kShiftLarmorMhz);
  return SystemSpec::single(w0n, 0.1 * w0n, C_rel * w0n, delta_rel * w0n);
}

SweepSchedule shift_sweep(SweepDirection direction) {
  return SweepSchedule::linear_sweep(from_mhz(kShiftLarmorMhz), from_mhz(kSweepHalfWidthMhz), kSweepTime,
                                     direction);
}

RepetitionModel repetition(double gamma_1bulk, double efficiency) {
  RepetitionModel m;
  m.gamma_1e = kElectronRate;
  m.gamma_1bulk = gamma_1bulk;
  m.p_e = thermal_polarization(kProtonConstants.gamma_e * kB0, kTemperature);
  m.T_s = kRotationTime;
  m.T_sweep = kSweepTime;
  m.T_off = kOffTime;
  m.N_max = kRepetitionRounds;
  m.transfer_efficiency = efficiency;
  m.cloud_size = 4.0;
  m.bulk_size = kBulkSize;
  return m;
}

SweepSchedule ahp() {
  const double peak = from_mhz(kAhpPeakMhz);
  const double alpha = from_mhz(kAhpAlphaMhz);
  return ahp_schedule(peak, alpha, kAhpSlowdown * min_sweep_time(alpha, peak));
}

}  // namespace pinned

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list{
      {"fig4",
       "Adiabatic sweep vs resonant lock for a one- and four-proton cloud.",
       {"t", "P_adiabatic_k1", "P_conventional_k1", "P_adiabatic_k4", "P_conventional_k4"},
       {{"B0", "1.2 T (omega_0n = gamma_n B0)", "given"},
        {"A", "4.7, 5.6, -0.059, 1.83343 MHz", "given"},
        {"C", "-1.56, 8.8, -0.029, -0.017 MHz", "given"},
        {"phi_hf", "0 for every proton", "chosen"},
        {"dipolar", "20 kHz within each water molecule (1-2, 3-4), 3 kHz between", "chosen"},
        {"sweep", "omega_0n +- 20 MHz over 2 us, high to low", "given"},
        {"lock", "omega_1e = omega_0n for 2 us", "chosen"},
        {"samples", "201", "chosen"}}},
      {"fig5",
       "Final polarization after one sweep vs A for three sweep times.",
       {"a_mhz", "P_T0.5us", "P_T1us", "P_T2us"},
       {{"omega_0n", "50 MHz", "given"},
        {"delta_omega", "20 MHz", "given"},
        {"T_sweep", "0.5, 1, 2 us", "chosen"},
        {"A grid", "0.25 to 10 MHz, 13 values", "chosen"},
        {"C, delta_omega0", "0", "chosen"}}},
      {"fig6",
       "Time-averaged polarization of a resonant lock over an (A, C) grid.",
       {"a_rel", "c_rel", "P_mean", "zq_periods"},
       {{"omega_0n", "51 MHz", "chosen"},
        {"A / omega_0n", "0.02, 0.05, 0.1, 0.2, 0.5, 1", "chosen"},
        {"C / omega_0n", "0, 0.05, 0.1, 0.2, 0.5, 1", "chosen"},
        {"averaging window", "10 periods of the C = 0 ZQ oscillation", "chosen"},
        {"samples", "20001 per point", "chosen"}}},
      {"fig7",
       "Polarization along the sweep for several energy-shifting strengths.",
       {"t", "P_C0", "P_C0.1", "P_C0.5", "P_C1"},
       {{"omega_0n", "51 MHz", "given"},
        {"A", "0.1 omega_0n", "given"},
        {"sweep", "omega_0n +- 20 MHz over 2 us, high to low", "given"},
        {"C / omega_0n", "0, 0.1, 0.5, 1", "given"},
        {"samples", "101 (stride 20 ns)", "chosen"}}},
      {"fig8",
       "Tilted-frame leakage amplitudes along the sweep with a local offset.",
       {"t", "omega_1e", "same_plus", "same_minus", "cross_plus_minus", "cross_minus_plus"},
       {{"omega_0n", "51 MHz", "given"},
        {"A", "0.1 omega_0n", "given"},
        {"delta_omega0", "0.5 omega_0n", "given"},
        {"direction", "low to high (crossing moves earlier)", "chosen"},
        {"points", "201 (stride 10 ns)", "chosen"}}},
      {"fig9",
       "Cloud and bulk polarization over repeated cycles for three leak ratios.",
       {"round", "P_cloud_ratio10", "P_cloud_ratio100", "P_cloud_ratio1000", "P_bulk_ratio10",
        "P_bulk_ratio100", "P_bulk_ratio1000"},
       {{"p_e", "thermal electron polarization at 1.2 T, 0.3 K", "derived"},
        {"gamma_1e", "1000 /s", "chosen"},
        {"gamma_1bulk", "100, 10, 1 /s (ratios 10, 100, 1000)", "chosen"},
        {"T_off", "3 ms", "chosen"},
        {"T_s, T_sweep", "30 ns, 2 us", "chosen"},
        {"cloud / bulk size", "4 / 4e7 protons", "chosen"},
        {"transfer efficiency", "one fig7 sweep of the C = 0 proton (~0.993)", "derived"},
        {"rounds", "200", "chosen"}}},
      {"appendixA",
       "Adiabatic half passage under B1 scaling, with its duration bound.",
       {"scale", "omega_1max_local", "tip_from_axis", "tip_from_x", "adiabaticity_margin"},
       {{"omega_1max", "150 MHz", "given"},
        {"alpha", "80 MHz (0.99 alpha > 3 x the 25.5 MHz offset spread)", "chosen"},
        {"beta", "acosh(100) ~ 5.298", "derived"},
        {"T_s", "100 x min_sweep_time", "chosen"},
        {"scales", "0.6, 1, 1.4", "given"}}},
  };
  return list;
}

bool is_preset(const std::string& name) {
  const auto& list = presets();
  return std::any_of(list.begin(), list.end(), [&](const PresetInfo& p) { return p.name == name; });
}

ResultTable run_preset(const std::string& name, const IntegratorConfig& integrator) {
  if (name == "fig4") return run_cloud_comparison(integrator);
  if (name == "fig5") return run_sweep_family(integrator);
  if (name == "fig6") return run_conventional_grid(integrator);
  if (name == "fig7") return run_shift_series(integrator);
  if (name == "fig8") return run_leakage_series();
  if (name == "fig9") return run_repetition(integrator);
  if (name == "appendixA") return run_ahp(integrator);
  throw ValidationError("preset", "unknown preset '" + name + "'");
}

std::string presets_text() {
  std::ostringstream out;
  for (const auto& p : presets()) out << p.name << "\t" << p.summary << "\n";
  return out.str();
}

std::string presets_markdown() {
  std::ostringstream out;
  out << "# Presets\n\n"
      << "Generated by `anovel presets list --format md`. Every number a preset fixes is listed\n"
      << "with its source: `given` values define the scenario, `chosen` values fill in what the\n"
      << "scenario leaves open, and `derived` values are computed from the others.\n";
  for (const auto& p : presets()) {
    out << "\n## " << p.name << "\n\n" << p.summary << "\n\nColumns: ";
    for (std::size_t i = 0; i < p.columns.size(); ++i) out << (i ? ", " : "") << "`" << p.columns[i] << "`";
    out << "\n\n| pin | value | source |\n|---|---|---|\n";
    for (const auto& pin : p.pins) out << "| " << pin.key << " | " << pin.value << " | " << pin.source << " |\n";
  }
  return out.str();
}

}  // namespace anovel::cli
