#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anovel/operators.hpp"
#include "anovel/schedule.hpp"
#include "anovel/system.hpp"

namespace anovel::cli {

// Frequencies below are ordinary-frequency MHz; to_spec / to_schedule convert to rad/s.

struct PositionConfig {
  double r_m = 0.0;
  double theta = 0.0;
  double varphi = 0.0;
};

struct NucleusConfig {
  std::string label;
  std::optional<double> a_mhz;
  std::optional<double> c_mhz;
  double phi_hf = 0.0;
  std::optional<PositionConfig> position;
  double fermi_contact_mhz = 0.0;
};

struct SystemConfig {
  std::optional<double> omega_0n_mhz;  // falls back to gamma_n * b0_t
  double delta_omega0_mhz = 0.0;
  std::optional<double> b0_t;
  std::optional<double> temperature_k;
  std::vector<NucleusConfig> nuclei;
  std::optional<std::vector<std::vector<double>>> dipolar_mhz;
  bool dipolar_from_geometry = false;

  [[nodiscard]] SystemSpec to_spec() const;
};

struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::LinearSweep;
  // constant
  double omega_1e_mhz = 0.0;
  double t_total_s = 0.0;
  double detuning_mhz = 0.0;
  // linear
  double delta_omega_mhz = 0.0;
  double t_sweep_s = 0.0;
  SweepDirection direction = SweepDirection::HighToLow;
  // ahp
  double omega_1max_mhz = 0.0;
  double alpha_mhz = 0.0;
  double t_s_s = 0.0;
  double scale = 1.0;
  /// Electron preparation; X for locks and sweeps, Z for AHP unless set.
  std::optional<ElectronAxis> initial;

  [[nodiscard]] SweepSchedule to_schedule(double omega_0n) const;
  [[nodiscard]] ElectronAxis initial_axis() const;
};

struct ScanConfig {
  std::string parameter;
  std::optional<std::size_t> nucleus;  // for per-nucleus parameters
  std::vector<double> grid;
};

enum class OutputFormat { Csv, Json };

struct OutputConfig {
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> path;
  std::size_t stride = 1;
};

struct IntegratorConfig {
  double tol = 1e-6;
  std::size_t steps = 2000;
  std::size_t samples = 101;
  std::size_t max_refinements = 8;
};

struct RunConfig {
  std::optional<std::string> preset;
  SystemConfig system;
  ScheduleConfig schedule;
  std::optional<ScanConfig> scan;
  OutputConfig output;
  IntegratorConfig integrator;
};

/// Names accepted by scan.parameter.
const std::vector<std::string>& scan_parameters();

/// Throws ValidationError with the JSON path of the first offending field.
RunConfig parse_config(const nlohmann::json& document);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical form with every default filled in.
nlohmann::ordered_json to_json(const RunConfig& config);

/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Rebuilds specs and schedules so that semantic errors surface with paths.
void validate(const RunConfig& config);

/// Sets one scan parameter to `value` (MHz or seconds as named).
void apply_scan_value(RunConfig& config, const ScanConfig& scan, double value);

std::string format_name(OutputFormat format);
OutputFormat parse_format(const std::string& name);

}  // namespace anovel::cli
