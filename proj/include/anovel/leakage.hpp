#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "anovel/block_model.hpp"
#include "anovel/schedule.hpp"
#include "anovel/system.hpp"

namespace anovel {

/// Block quantities after rotating the electron onto its effective field
/// (w1e, 0, delta_omega0). The structure matches BlockModel with w1e -> omega_eff
/// and A -> A cos(theta_s).
struct TiltedFrame {
  double theta_s = 0.0;    // atan(delta_omega0 / w1e)
  double omega_eff = 0.0;  // sqrt(delta_omega0^2 + w1e^2)
  double psi_t = 0.0;
  double phi_t = 0.0;
  double Omega_DQ_t = 0.0;
  double Omega_ZQ_t = 0.0;
  BlockModel block;
};

TiltedFrame tilted_frame(double delta_omega0, double omega_1e, double omega_0n, double A);

/// Time at which sqrt(delta_omega0^2 + amplitude(t)^2) = w0n on a linear sweep.
/// None when |delta_omega0| >= w0n or the root falls outside [0, T].
std::optional<double> crossing_time(double delta_omega0, const SweepSchedule& schedule,
                                    double omega_0n);

/// Mixing amplitudes between tilted DQ and ZQ eigenstates:
///   same  = |A sin(th) sin(psi - phi) + C cos(th) cos(psi + phi)| / |4 (Omega_DQ - Omega_ZQ)|
///   cross = |A sin(th) cos(psi - phi) + C cos(th) sin(psi + phi)| / |4 (Omega_DQ + Omega_ZQ)|
/// The plus/minus members of each family share one value.
LeakageRates tilted_leakage_rates(double A, double C, double delta_omega0, double omega_1e,
                                  double omega_0n);

/// Exact first-order amplitudes |<Phi|H1|Psi>| / |E_Phi - E_Psi| from the 4x4
/// Hamiltonian. H0 is the part of H that preserves the DQ/ZQ blocks of the
/// tilted basis and H1 is the rest. Used to check the closed form above.
LeakageRates first_order_amplitudes(double A, double C, double delta_omega0, double omega_1e,
                                    double omega_0n);

/// First time the series reaches half of its final value, linearly
/// interpolated between samples. None if the final value is not positive.
std::optional<double> transfer_midpoint(const std::vector<double>& times,
                                        const std::vector<double>& values);

struct LeakageTrace {
  std::vector<double> times;
  std::vector<double> omega_1e;
  std::vector<LeakageRates> rates;

  [[nodiscard]] std::vector<double> same() const;   // same_plus
  [[nodiscard]] std::vector<double> cross() const;  // cross_plus_minus
};

/// tilted_leakage_rates along a linear sweep at n_points uniformly spaced
/// instants, using nucleus 0 of a single-nucleus spec.
LeakageTrace leakage_trace(const SystemSpec& spec, const SweepSchedule& schedule,
                           std::size_t n_points);

}  // namespace anovel
