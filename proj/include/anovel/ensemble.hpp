#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "anovel/operators.hpp"
#include "anovel/propagate.hpp"
#include "anovel/schedule.hpp"
#include "anovel/system.hpp"

namespace anovel {

/// One electron with a cloud of 1..6 coupled nuclei.
struct CloudSpec {
  SystemSpec system;

  /// Labels from the nuclei, falling back to "n<i>".
  [[nodiscard]] std::vector<std::string> labels() const;
  void validate() const;
};

struct CloudResult {
  Trajectory trajectory;
  std::vector<std::string> labels;

  [[nodiscard]] std::vector<double> final_per_nucleus() const;
  [[nodiscard]] double final_total() const;
  /// Trapezoidal time average of the total nuclear polarization.
  [[nodiscard]] double time_average_total() const;
};

/// Full Hilbert-space propagation with the electron prepared along `initial`
/// (X for a spin-locked start) and every nucleus maximally mixed.
CloudResult simulate_cloud(const CloudSpec& cloud, const SweepSchedule& schedule,
                           const PropagateOptions& options = {},
                           ElectronAxis initial = ElectronAxis::X);

/// Final total nuclear polarization of one pass, per unit electron polarization.
double single_pass_efficiency(const SystemSpec& system, const SweepSchedule& schedule,
                              const PropagateOptions& options = {});

struct DiffusionParams {
  double a = 0.0;   // mean proton spacing, m
  double T2 = 0.0;  // s
  double L = 0.0;   // depth, m
  std::optional<double> rho_n;  // 1/m^3; overrides a with rho_n^(-1/3)
  int dimensionality = 1;

  [[nodiscard]] double spacing() const;
  void validate() const;
};

/// a^2 / (50 T2)
double diffusion_constant(const DiffusionParams& params);
/// L^2 / (2 dim D)
double diffusion_time(const DiffusionParams& params);
double diffusion_time(double L, double D, int dimensionality = 1);

/// Electron + cloud + bulk recurrence. Each round:
///  1. transfer: delta = eta (P_e - P_cloud); P_e -= delta; P_cloud += delta / cloud_size
///  2. wait T_off: P_e relaxes to p_e at gamma_1e; cloud and bulk exchange at gamma_1bulk,
///     conserving cloud_size P_cloud + bulk_size P_bulk.
/// gamma_1e may be +inf (instant repolarization).
struct RepetitionModel {
  double gamma_1e = 0.0;      // 1/s
  double gamma_1bulk = 0.0;   // 1/s
  double p_e = 0.0;
  double T_s = 0.0;           // s
  double T_sweep = 0.0;       // s
  double T_off = 0.0;         // s
  std::size_t N_max = 1000;
  double transfer_efficiency = 1.0;
  double cloud_size = 1.0;    // nuclei in the cloud
  double bulk_size = 1e7;     // nuclei in the bulk reservoir
  double initial_nuclear = 0.0;
  std::optional<double> T_1n;  // s, enables the budget check

  [[nodiscard]] double T_cycle() const noexcept { return T_s + T_sweep + T_off; }
  void validate() const;
};

struct RepetitionResult {
  std::vector<double> P_cloud;     // after each round, index r - 1
  std::vector<double> P_bulk;
  std::vector<double> P_electron;  // after each round's wait
  double mean_cloud = 0.0;         // (1/N) sum_r P_cloud(r)
  std::optional<double> budget_fraction;  // N T_cycle / T_1n

  [[nodiscard]] bool within_budget(double limit = 0.1) const {
    return !budget_fraction || *budget_fraction <= limit;
  }
};

RepetitionResult repeat_experiment(const RepetitionModel& model, std::size_t N);

}  // namespace anovel
