#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "anovel/constants.hpp"

namespace anovel {

inline constexpr std::size_t kMaxNuclei = 6;

/// Pseudo-secular hyperfine couplings of one nucleus, rad/s.
///  - A multiplies S_z (cos(phi_hf) I_x + sin(phi_hf) I_y) and mixes nuclear levels.
///  - C multiplies S_z I_z and shifts them.
struct HyperfineParams {
  double A = 0.0;
  double C = 0.0;
  double phi_hf = 0.0;  // azimuth, [0, 2pi)
};

/// Electron -> nucleus vector in the Zeeman frame.
struct SphericalPosition {
  double R = 0.0;  // m
  double theta = 0.0;
  double varphi = 0.0;

  [[nodiscard]] Eigen::Vector3d cartesian() const;
};

struct NucleusSpec {
  HyperfineParams hyperfine;
  std::optional<SphericalPosition> position;
  double fermi_contact_zz = 0.0;  // rad/s, only used for the geometry cross-check
  std::string label;
};

/// Scalar parameters of one electron and k nuclei. Basis ordering of every
/// operator built from it: electron factor first, nuclei in list order.
struct SystemSpec {
  double omega_0n = 0.0;      // nuclear Larmor, rad/s
  double omega_0e = 0.0;      // electron Larmor, rad/s (bookkeeping only)
  double delta_omega0 = 0.0;  // local electron offset, rad/s
  std::vector<NucleusSpec> nuclei;
  Eigen::MatrixXd dipolar;  // k x k, d_ij in rad/s; empty means no couplings

  [[nodiscard]] std::size_t k() const noexcept { return nuclei.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return std::size_t{2} << nuclei.size(); }

  /// Throws ValidationError (with a field path) on any broken invariant.
  void validate(const PhysConstants& constants = kProtonConstants) const;

  /// Convenience for the common single-nucleus case.
  static SystemSpec single(double omega_0n, double A, double C = 0.0,
                           double delta_omega0 = 0.0, double phi_hf = 0.0);
};

/// A = (3/2) b sin(2 theta), C = b (3 cos^2 theta - 1) + Fzz, phi_hf = varphi,
/// with b = mu0 gamma_e gamma_n hbar / (4 pi R^3).
HyperfineParams hyperfine_from_geometry(const SphericalPosition& position, double fermi_contact_zz,
                                        const PhysConstants& constants = kProtonConstants);

/// Secular homonuclear couplings d_ij for H = sum_{i<j} d_ij (3 Iz_i Iz_j - I_i . I_j),
/// d_ij = b_ij (1 - 3 cos^2 theta_ij) / 2 with b_ij = mu0 gamma_n^2 hbar / (4 pi r_ij^3).
Eigen::MatrixXd dipolar_from_positions(std::span<const SphericalPosition> positions,
                                       const PhysConstants& constants = kProtonConstants);

/// Boltzmann polarization of a two-level system: tanh(hbar omega / 2 kB T).
double thermal_polarization(double omega, double temperature,
                            const PhysConstants& constants = kProtonConstants);

}  // namespace anovel
