#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "anovel/system.hpp"

namespace anovel {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Which single-spin basis the electron factor is written in. Nuclear
/// factors are always in the Z basis. In the X basis |up>_X comes first.
enum class ElectronBasis { Z, X };

/// Direction of the pure electron state used for preparation.
enum class ElectronAxis { Z, X };

struct OperatorMatrix {
  CMatrix entries;
  ElectronBasis basis = ElectronBasis::Z;
  bool hermitian = true;

  [[nodiscard]] Eigen::Index dim() const noexcept { return entries.rows(); }
  /// max |M - M^dagger|
  [[nodiscard]] double hermiticity_error() const;
};

/// Dense density matrix over the 2^(k+1) dimensional space.
struct QuantumState {
  CMatrix rho;
  ElectronBasis basis = ElectronBasis::Z;

  [[nodiscard]] Eigen::Index dim() const noexcept { return rho.rows(); }
  [[nodiscard]] std::size_t n_nuclei() const;

  /// Throws DomainError if not Hermitian, trace-one and positive within tol.
  void validate(double tol = 1e-10) const;

  /// Same physical state with the electron factor rewritten in `target`.
  [[nodiscard]] QuantumState in_basis(ElectronBasis target) const;

  [[nodiscard]] double purity() const;
  [[nodiscard]] double min_eigenvalue() const;
};

namespace spin {
// Spin-1/2 operators (Pauli / 2) in the Z basis.
Eigen::Matrix2cd sx();
Eigen::Matrix2cd sy();
Eigen::Matrix2cd sz();
// The same operators with the basis ordered {|up>_X, |down>_X}.
Eigen::Matrix2cd sx_in_x();
Eigen::Matrix2cd sy_in_x();
Eigen::Matrix2cd sz_in_x();
}  // namespace spin

/// Electron operator `op` embedded as op (x) 1 over k nuclei.
CMatrix electron_operator(const Eigen::Matrix2cd& op, std::size_t k);
/// Nuclear operator on site `index` (0-based) among k nuclei.
CMatrix nuclear_operator(const Eigen::Matrix2cd& op, std::size_t index, std::size_t k);
/// Unitary W (x) 1 whose columns are the X-basis electron states; O_X = W^dagger O_Z W.
CMatrix electron_basis_change(std::size_t k);

/// Hamiltonian split into the time-independent part and the two electron
/// control directions:  H(t) = fixed + amplitude(t) * electron_x + offset(t) * electron_z.
struct HamiltonianParts {
  CMatrix fixed;
  CMatrix electron_x;  // S_x (x) 1
  CMatrix electron_z;  // S_z (x) 1
  ElectronBasis basis = ElectronBasis::Z;

  [[nodiscard]] CMatrix at(double amplitude, double offset) const;
};

HamiltonianParts hamiltonian_parts(const SystemSpec& spec, ElectronBasis basis = ElectronBasis::Z);

/// (delta_omega0 S_z + omega_1e S_x) (x) 1 + sum_i omega_0n Iz_i
///   + sum_i S_z (x) (A_i (cos phi_i Ix_i + sin phi_i Iy_i) + C_i Iz_i) + H_dipolar
OperatorMatrix build_rotating_hamiltonian(const SystemSpec& spec, double omega_1e,
                                          ElectronBasis basis = ElectronBasis::Z);

/// |up><up|_axis (x) 1/2^k, returned in the Z basis.
QuantumState initial_state(const SystemSpec& spec, ElectronAxis axis);

/// Electron pure along the unit vector (sin(polar) cos(azimuth), sin(polar) sin(azimuth), cos(polar)),
/// nuclei maximally mixed. Z basis.
QuantumState initial_state_along(const SystemSpec& spec, double polar, double azimuth = 0.0);

struct Observables {
  double electron_x = 0.0;  // Tr[(sigma_x (x) 1) rho]
  double electron_y = 0.0;
  double electron_z = 0.0;
  std::vector<double> nuclear_z;  // Tr[sigma_z,i rho] per nucleus

  [[nodiscard]] double total_nuclear() const;
};

Observables observables(const QuantumState& state);

/// Zero/double-quantum structure of the single-nucleus space, written in the
/// X basis with ordering |up,Up>, |up,Down>, |down,Up>, |down,Down>.
struct BlockOperators {
  CMatrix projector_dq;  // span{|up Up>, |down Down>}
  CMatrix projector_zq;  // span{|up Down>, |down Up>}
  CMatrix sigma_z_dq;
  CMatrix sigma_x_dq;
  CMatrix sigma_z_zq;
  CMatrix sigma_x_zq;
};

const BlockOperators& block_operators();

}  // namespace anovel
