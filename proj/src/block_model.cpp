#include "anovel/block_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "anovel/errors.hpp"

namespace anovel {

namespace {

// |numerator / denominator|, or +inf with the flag raised.
double ratio_or_flag(double numerator, double denominator, bool& degenerate) {
  if (denominator == 0.0) {
    degenerate = true;
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(numerator / denominator);
}

}  // namespace

BlockModel block_model(double omega_1e, double omega_0n, double A) {
  if (!(omega_0n > 0.0)) throw DomainError("block_model: omega_0n must be positive");
  BlockModel m;
  m.omega_1e = omega_1e;
  m.omega_0n = omega_0n;
  m.A = A;
  const double half_a = 0.5 * A;
  const double sum = omega_1e + omega_0n;
  const double diff = omega_1e - omega_0n;
  m.Omega_DQ = 0.5 * std::hypot(sum, half_a);
  m.Omega_ZQ = 0.5 * std::hypot(diff, half_a);
  m.psi_dq = std::atan2(half_a, sum);
  m.phi_zq = std::atan2(half_a, diff);
  return m;
}

double magnetization_analytic(const BlockModel& model, double t) {
  const double sp = std::sin(model.psi_dq);
  const double cp = std::cos(model.psi_dq);
  const double sf = std::sin(model.phi_zq);
  const double cf = std::cos(model.phi_zq);
  const double dq = cp * cp + std::cos(2.0 * model.Omega_DQ * t) * sp * sp;
  const double zq = cf * cf + std::cos(2.0 * model.Omega_ZQ * t) * sf * sf;
  return 0.5 * (dq - zq);
}

double lz_exponent(double A, double delta_omega, double T_sweep) {
  if (!(T_sweep > 0.0)) throw DomainError("lz_exponent: T_sweep must be positive");
  if (!(delta_omega > 0.0)) throw DomainError("lz_exponent: delta_omega must be positive");
  const double coupling = 0.25 * A;
  const double rate = 2.0 * delta_omega / T_sweep;
  return coupling * coupling / rate;
}

double lz_probability(double A, double delta_omega, double T_sweep) {
  return std::exp(-2.0 * std::numbers::pi * lz_exponent(A, delta_omega, T_sweep));
}

LeakageRates leakage_rates_c(const BlockModel& model, double C) {
  LeakageRates r;
  const double angle = model.psi_dq - model.phi_zq;
  const double same =
      ratio_or_flag(0.25 * C * std::sin(angle), model.Omega_DQ - model.Omega_ZQ, r.degenerate_same);
  const double cross =
      ratio_or_flag(0.25 * C * std::cos(angle), model.Omega_DQ + model.Omega_ZQ, r.degenerate_cross);
  r.same_plus = r.same_minus = same;
  r.cross_plus_minus = r.cross_minus_plus = cross;
  return r;
}

}  // namespace anovel
