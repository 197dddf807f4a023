#pragma once

#include <cstddef>
#include <optional>
#include <variant>

namespace anovel {

enum class ScheduleKind { ConstantLock, LinearSweep, AHP };

/// HighToLow: amplitude(t) = w0n - dw (2t/T - 1), i.e. starts at w0n + dw.
enum class SweepDirection { HighToLow, LowToHigh };

struct ConstantLockParams {
  double omega_1e = 0.0;
  double detuning = 0.0;  // constant w_c - w_0e
};

struct LinearSweepParams {
  double omega_0n = 0.0;
  double delta_omega = 0.0;
  SweepDirection direction = SweepDirection::HighToLow;
};

/// amplitude(s) = w1max sech(beta (s - 1)), detuning(s) = alpha tanh(beta (s - 1)), s = t / T_s.
struct AhpParams {
  double omega_1max = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> frozen_s;  // evaluate every instant at this s
};

using ScheduleParams = std::variant<ConstantLockParams, LinearSweepParams, AhpParams>;

/// Time program of the microwave field in the frame rotating at w_c(t).
/// amplitude(t) is the Rabi frequency (rad/s); detuning(t) is w_c(t) - w_0e,
/// which enters the Hamiltonian as -detuning(t) S_z.
class SweepSchedule {
 public:
  static SweepSchedule constant_lock(double omega_1e, double T_total, double detuning = 0.0);
  static SweepSchedule linear_sweep(double omega_0n, double delta_omega, double T_sweep,
                                    SweepDirection direction = SweepDirection::HighToLow);

  [[nodiscard]] ScheduleKind kind() const noexcept;
  [[nodiscard]] double duration() const noexcept { return total_; }
  [[nodiscard]] const ScheduleParams& params() const noexcept { return params_; }

  [[nodiscard]] double amplitude(double t) const;
  [[nodiscard]] double detuning(double t) const;
  [[nodiscard]] bool time_independent() const noexcept;

  /// AHP only: same program with w1max scaled (local B1 inhomogeneity).
  [[nodiscard]] SweepSchedule with_amplitude_scale(double factor) const;
  /// AHP only: hold the program at s for the whole duration.
  [[nodiscard]] SweepSchedule frozen_at(double s) const;

 private:
  friend SweepSchedule ahp_schedule(double, double, double);
  SweepSchedule(ScheduleParams params, double total);

  ScheduleParams params_;
  double total_ = 0.0;
};

/// Root of sech(beta) = 0.01.
double ahp_beta();

SweepSchedule ahp_schedule(double omega_1max, double alpha, double T_s);

/// Lower bound on the AHP duration: beta alpha / w1max^2.
double min_sweep_time(double alpha, double omega_1max);

/// min_t w_eff(t) / |d theta / dt| with theta = atan2(amplitude, offset - detuning)
/// and w_eff = |(amplitude, offset - detuning)|, by central differences on a
/// uniform grid. +inf when the field never turns.
double adiabaticity_margin(const SweepSchedule& schedule, double omega_0e_offset,
                           std::size_t n_grid = 20000);

}  // namespace anovel
