#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "anovel/operators.hpp"
#include "anovel/schedule.hpp"
#include "anovel/system.hpp"

namespace anovel {

struct PropagateOptions {
  std::size_t n_steps = 2000;   // initial step count over the whole schedule
  double tol = 1e-6;            // max allowed observable change under step halving
  std::size_t n_samples = 101;  // reported instants, including t = 0 and t = T
  std::size_t max_refinements = 8;
  bool store_states = true;
};

/// Evidence that the accepted run is converged: the observables of the run
/// with `steps` steps differ from the run with half as many by `max_change`.
struct ConvergenceCertificate {
  std::size_t steps = 0;
  std::size_t refinements = 0;
  double max_change = 0.0;
  double tol = 0.0;
};

/// Worst-case departures from a physical density matrix along a trajectory.
struct InvariantReport {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;
  double max_purity_drift = 0.0;

  [[nodiscard]] bool satisfied(double trace_tol = 1e-10, double eig_floor = -1e-10,
                               double purity_tol = 1e-8) const noexcept;
  void merge(const InvariantReport& other) noexcept;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;  // empty unless PropagateOptions::store_states
  std::vector<Observables> observables;
  ConvergenceCertificate certificate;
  InvariantReport invariants;

  [[nodiscard]] std::vector<double> electron_x() const;
  [[nodiscard]] std::vector<double> nuclear(std::size_t index) const;
  [[nodiscard]] std::vector<double> total_nuclear() const;
  [[nodiscard]] const Observables& final() const { return observables.back(); }
};

/// exp(-i H dt) for Hermitian H by eigendecomposition.
CMatrix unitary_step(const CMatrix& H, double dt);

/// Midpoint piecewise-constant propagation of rho0 under
///   H(t) = H_fixed(spec) + amplitude(t) S_x - detuning(t) S_z
/// with step doubling until every sampled observable moves by less than tol.
/// Throws ConvergenceError when max_refinements doublings are not enough.
Trajectory propagate(const SystemSpec& spec, const SweepSchedule& schedule,
                     const QuantumState& rho0, const PropagateOptions& options = {});

struct AhpOptions {
  double delta_omega0 = 0.0;               // local electron offset
  std::optional<SystemSpec> full_system;   // propagate with nuclei when set
  PropagateOptions propagate{20000, 1e-7, 2, 10, false};
};

struct AhpRotation {
  Eigen::Vector3d bloch;          // final electron Bloch vector
  Eigen::Vector3d field_axis;     // unit vector of the final local effective field
  double tip_from_x_deg = 0.0;
  double tip_from_axis_deg = 0.0;
  ConvergenceCertificate certificate;
  InvariantReport invariants;
};

/// Rotate an electron prepared along +Z with an AHP schedule whose peak
/// amplitude is replaced by the local value. Works in the frame rotating at
/// w_c(t): the electron sees (delta_omega0 - detuning(t)) S_z + amplitude(t) S_x.
AhpRotation simulate_ahp_rotation(double omega_1max_local, const SweepSchedule& schedule,
                                  const AhpOptions& options = {});

}  // namespace anovel
