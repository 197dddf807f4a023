#include "anovel/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anovel/errors.hpp"

namespace anovel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

SweepSchedule::SweepSchedule(ScheduleParams params, double total)
    : params_(std::move(params)), total_(total) {
  if (!(total_ > 0.0) || !std::isfinite(total_)) throw DomainError("schedule duration must be positive");
}

SweepSchedule SweepSchedule::constant_lock(double omega_1e, double T_total, double detuning) {
  if (!(omega_1e >= 0.0)) throw DomainError("constant lock amplitude must be non-negative");
  return SweepSchedule(ConstantLockParams{omega_1e, detuning}, T_total);
}

SweepSchedule SweepSchedule::linear_sweep(double omega_0n, double delta_omega, double T_sweep,
                                          SweepDirection direction) {
  if (!(omega_0n > 0.0)) throw DomainError("linear sweep: omega_0n must be positive");
  if (!(delta_omega > 0.0)) throw DomainError("linear sweep: delta_omega must be positive");
  if (delta_omega > omega_0n) throw DomainError("linear sweep: amplitude would go negative");
  return SweepSchedule(LinearSweepParams{omega_0n, delta_omega, direction}, T_sweep);
}

ScheduleKind SweepSchedule::kind() const noexcept {
  return std::visit(overloaded{[](const ConstantLockParams&) { return ScheduleKind::ConstantLock; },
                               [](const LinearSweepParams&) { return ScheduleKind::LinearSweep; },
                               [](const AhpParams&) { return ScheduleKind::AHP; }},
                    params_);
}

double SweepSchedule::amplitude(double t) const {
  return std::visit(
      overloaded{[](const ConstantLockParams& p) { return p.omega_1e; },
                 [&](const LinearSweepParams& p) {
                   const double sign = p.direction == SweepDirection::HighToLow ? 1.0 : -1.0;
                   return p.omega_0n - sign * p.delta_omega * (2.0 * t / total_ - 1.0);
                 },
                 [&](const AhpParams& p) {
                   const double s = p.frozen_s.value_or(t / total_);
                   return p.omega_1max / std::cosh(p.beta * (s - 1.0));
                 }},
      params_);
}

double SweepSchedule::detuning(double t) const {
  return std::visit(overloaded{[](const ConstantLockParams& p) { return p.detuning; },
                               [](const LinearSweepParams&) { return 0.0; },
                               [&](const AhpParams& p) {
                                 const double s = p.frozen_s.value_or(t / total_);
                                 return p.alpha * std::tanh(p.beta * (s - 1.0));
                               }},
                    params_);
}

bool SweepSchedule::time_independent() const noexcept {
  if (std::holds_alternative<ConstantLockParams>(params_)) return true;
  if (const auto* p = std::get_if<AhpParams>(&params_)) return p->frozen_s.has_value();
  return false;
}

SweepSchedule SweepSchedule::with_amplitude_scale(double factor) const {
  const auto* p = std::get_if<AhpParams>(&params_);
  if (p == nullptr) throw DomainError("with_amplitude_scale: AHP schedule required");
  if (!(factor > 0.0)) throw DomainError("with_amplitude_scale: factor must be positive");
  AhpParams scaled = *p;
  scaled.omega_1max *= factor;
  return SweepSchedule(scaled, total_);
}

SweepSchedule SweepSchedule::frozen_at(double s) const {
  const auto* p = std::get_if<AhpParams>(&params_);
  if (p == nullptr) throw DomainError("frozen_at: AHP schedule required");
  AhpParams frozen = *p;
  frozen.frozen_s = s;
  return SweepSchedule(frozen, total_);
}

double ahp_beta() { return std::acosh(100.0); }

SweepSchedule ahp_schedule(double omega_1max, double alpha, double T_s) {
  if (!(omega_1max > 0.0) || !(alpha > 0.0) || !(T_s > 0.0)) {
    throw DomainError("ahp_schedule: parameters must be positive");
  }
  return SweepSchedule(AhpParams{omega_1max, alpha, ahp_beta(), std::nullopt}, T_s);
}

double min_sweep_time(double alpha, double omega_1max) {
  if (!(alpha >= 0.0) || !(omega_1max > 0.0)) throw DomainError("min_sweep_time: invalid inputs");
  return ahp_beta() * alpha / (omega_1max * omega_1max);
}

double adiabaticity_margin(const SweepSchedule& schedule, double omega_0e_offset, std::size_t n_grid) {
  if (schedule.time_independent()) return std::numeric_limits<double>::infinity();
  n_grid = std::max<std::size_t>(n_grid, 10000);
  const double T = schedule.duration();
  const double h = T / static_cast<double>(n_grid - 1);
  auto theta = [&](double t) {
    return std::atan2(schedule.amplitude(t), omega_0e_offset - schedule.detuning(t));
  };
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double t = h * static_cast<double>(i);
    const double lo = std::max(0.0, t - h);
    const double hi = std::min(T, t + h);
    const double rate = std::abs(theta(hi) - theta(lo)) / (hi - lo);
    const double field = std::hypot(schedule.amplitude(t), omega_0e_offset - schedule.detuning(t));
    if (rate > 0.0) margin = std::min(margin, field / rate);
  }
  return margin;
}

}  // namespace anovel
