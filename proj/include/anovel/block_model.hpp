#pragma once

namespace anovel {

/// Closed-form 2x2 reduction of the single-nucleus Hamiltonian at zero
/// offset and C = 0. Omega_* are the positive eigenvalues of each block
/// (half the block's level splitting).
struct BlockModel {
  double omega_1e = 0.0;
  double omega_0n = 0.0;
  double A = 0.0;
  double Omega_DQ = 0.0;  // (1/2) sqrt((w1e + w0n)^2 + (A/2)^2)
  double Omega_ZQ = 0.0;  // (1/2) sqrt((w1e - w0n)^2 + (A/2)^2)
  double psi_dq = 0.0;    // atan2(A/2, w1e + w0n)
  double phi_zq = 0.0;    // atan2(A/2, w1e - w0n); passes through pi/2 at w1e = w0n
};

BlockModel block_model(double omega_1e, double omega_0n, double A);

/// Tr[(1 (x) sigma_z) rho(t)] for rho(0) = |up><up|_X (x) 1/2 under a constant lock:
///   (1/2) { [cos^2 psi + cos(2 Omega_DQ t) sin^2 psi] - [cos^2 phi + cos(2 Omega_ZQ t) sin^2 phi] }
/// The 1/2 is the weight of each block in rho(0); the oscillation frequency is the
/// full level splitting of each block.
double magnetization_analytic(const BlockModel& model, double t);

/// Landau-Zener exponent gamma = (A/4)^2 / |d(w1e - w0n)/dt| for a linear sweep of
/// total width 2 * delta_omega over T_sweep.
double lz_exponent(double A, double delta_omega, double T_sweep);

/// Probability of staying in the diabatic ZQ state: exp(-2 pi gamma).
double lz_probability(double A, double delta_omega, double T_sweep);

/// Dimensionless DQ <-> ZQ mixing amplitudes. `same` is Phi(+-) <-> Psi(+-),
/// `cross` is Phi(+-) <-> Psi(-+). A vanishing denominator is reported through
/// the flags and an infinite value.
struct LeakageRates {
  double same_plus = 0.0;
  double same_minus = 0.0;
  double cross_plus_minus = 0.0;
  double cross_minus_plus = 0.0;
  bool degenerate_same = false;
  bool degenerate_cross = false;

  [[nodiscard]] bool degenerate() const noexcept { return degenerate_same || degenerate_cross; }
};

/// Rates induced by the energy-shifting term C S_z I_z:
///   same  = (C/4) |sin(psi - phi) / (Omega_DQ - Omega_ZQ)|
///   cross = (C/4) |cos(psi - phi) / (Omega_DQ + Omega_ZQ)|
LeakageRates leakage_rates_c(const BlockModel& model, double C);

}  // namespace anovel
