#include "anovel/system.hpp"

#include <cmath>
#include <string>

#include "anovel/errors.hpp"

namespace anovel {

namespace {

std::string nucleus_path(std::size_t i, const char* field) {
  return "nuclei[" + std::to_string(i) + "]." + field;
}

bool close_rel(double a, double b, double scale, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), scale});
}

}  // namespace

Eigen::Vector3d SphericalPosition::cartesian() const {
  return {R * std::sin(theta) * std::cos(varphi), R * std::sin(theta) * std::sin(varphi),
          R * std::cos(theta)};
}

void SystemSpec::validate(const PhysConstants& constants) const {
  if (!std::isfinite(omega_0n) || !(omega_0n > 0.0)) {
    throw ValidationError("omega_0n", "nuclear Larmor frequency must be positive");
  }
  if (!std::isfinite(delta_omega0)) throw ValidationError("delta_omega0", "must be finite");
  if (nuclei.size() > kMaxNuclei) {
    throw ValidationError("nuclei", "at most " + std::to_string(kMaxNuclei) + " nuclei supported");
  }
  for (std::size_t i = 0; i < nuclei.size(); ++i) {
    const auto& n = nuclei[i];
    const auto& hf = n.hyperfine;
    if (!std::isfinite(hf.A)) throw ValidationError(nucleus_path(i, "A"), "must be finite");
    if (!std::isfinite(hf.C)) throw ValidationError(nucleus_path(i, "C"), "must be finite");
    if (!(hf.phi_hf >= 0.0 && hf.phi_hf < kTwoPi)) {
      throw ValidationError(nucleus_path(i, "phi_hf"), "must lie in [0, 2pi)");
    }
    if (n.position) {
      if (!(n.position->R > 0.0)) throw ValidationError(nucleus_path(i, "position.R"), "must be positive");
      const HyperfineParams geo = hyperfine_from_geometry(*n.position, n.fermi_contact_zz, constants);
      const double scale = constants.electron_nuclear_coupling(n.position->R);
      const double dphi = std::remainder(geo.phi_hf - hf.phi_hf, kTwoPi);
      if (!close_rel(geo.A, hf.A, scale, 1e-9) || !close_rel(geo.C, hf.C, scale, 1e-9) ||
          std::abs(dphi) > 1e-9) {
        throw ValidationError(nucleus_path(i, "hyperfine"),
                              "disagrees with the value derived from position");
      }
    }
  }
  if (dipolar.size() != 0) {
    const auto k = static_cast<Eigen::Index>(nuclei.size());
    if (dipolar.rows() != k || dipolar.cols() != k) {
      throw ValidationError("dipolar", "must be a k x k matrix");
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      if (dipolar(i, i) != 0.0) throw ValidationError("dipolar", "diagonal must be zero");
      for (Eigen::Index j = 0; j < k; ++j) {
        if (!std::isfinite(dipolar(i, j))) throw ValidationError("dipolar", "must be finite");
        if (dipolar(i, j) != dipolar(j, i)) throw ValidationError("dipolar", "must be symmetric");
      }
    }
  }
}

SystemSpec SystemSpec::single(double omega_0n, double A, double C, double delta_omega0,
                              double phi_hf) {
  SystemSpec spec;
  spec.omega_0n = omega_0n;
  spec.delta_omega0 = delta_omega0;
  spec.nuclei.push_back(NucleusSpec{HyperfineParams{A, C, phi_hf}, std::nullopt, 0.0, "n0"});
  return spec;
}

HyperfineParams hyperfine_from_geometry(const SphericalPosition& position, double fermi_contact_zz,
                                        const PhysConstants& constants) {
  if (!(position.R > 0.0)) throw DomainError("hyperfine_from_geometry: R must be positive");
  const double b = constants.electron_nuclear_coupling(position.R);
  const double c = std::cos(position.theta);
  HyperfineParams hf;
  hf.A = 1.5 * b * std::sin(2.0 * position.theta);
  hf.C = b * (3.0 * c * c - 1.0) + fermi_contact_zz;
  hf.phi_hf = std::fmod(position.varphi, kTwoPi);
  if (hf.phi_hf < 0.0) hf.phi_hf += kTwoPi;
  return hf;
}

Eigen::MatrixXd dipolar_from_positions(std::span<const SphericalPosition> positions,
                                       const PhysConstants& constants) {
  const auto k = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const Eigen::Vector3d r = positions[j].cartesian() - positions[i].cartesian();
      const double dist = r.norm();
      if (!(dist > 0.0)) throw DomainError("dipolar_from_positions: coincident nuclei");
      const double cos_t = r.z() / dist;
      const double value = constants.nuclear_nuclear_coupling(dist) * 0.5 * (1.0 - 3.0 * cos_t * cos_t);
      d(i, j) = value;
      d(j, i) = value;
    }
  }
  return d;
}

double thermal_polarization(double omega, double temperature, const PhysConstants& constants) {
  if (!(temperature > 0.0)) throw DomainError("thermal_polarization: temperature must be positive");
  return std::tanh(constants.hbar * omega / (2.0 * constants.kB * temperature));
}

}  // namespace anovel
