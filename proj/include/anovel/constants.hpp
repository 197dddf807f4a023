#pragma once

#include <numbers>

namespace anovel {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Physical constants (SI). Gyromagnetic ratios are stored as magnitudes in
/// rad/s/T; the nuclear one defaults to the proton.
struct PhysConstants {
  double mu0 = 1.25663706212e-6;      // T m / A
  double hbar = 1.054571817e-34;      // J s
  double kB = 1.380649e-23;           // J / K
  double gamma_e = 1.76085963023e11;  // rad / s / T
  double gamma_n = 2.6752218744e8;    // rad / s / T

  /// Throws DomainError unless every constant is strictly positive.
  void validate() const;

  /// mu0 * gamma_e * gamma_n * hbar / (4 pi R^3), in rad/s.
  [[nodiscard]] double electron_nuclear_coupling(double R) const;

  /// mu0 * gamma_n^2 * hbar / (4 pi r^3), in rad/s.
  [[nodiscard]] double nuclear_nuclear_coupling(double r) const;
};

inline constexpr PhysConstants kProtonConstants{};

// All angular frequencies are rad/s internally. Config files and CLI output
// use ordinary-frequency MHz; these are the only conversion points.
constexpr double from_mhz(double f_mhz) { return kTwoPi * f_mhz * 1e6; }
constexpr double to_mhz(double omega) { return omega / (kTwoPi * 1e6); }

}  // namespace anovel
