#include "anovel/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "anovel/errors.hpp"

namespace anovel {

namespace {

struct MeasurementOps {
  CMatrix ex, ey, ez;
  std::vector<CMatrix> nz;

  explicit MeasurementOps(std::size_t k)
      : ex(2.0 * electron_operator(spin::sx(), k)),
        ey(2.0 * electron_operator(spin::sy(), k)),
        ez(2.0 * electron_operator(spin::sz(), k)) {
    for (std::size_t i = 0; i < k; ++i) nz.push_back(2.0 * nuclear_operator(spin::sz(), i, k));
  }

  [[nodiscard]] Observables measure(const CMatrix& rho) const {
    auto tr = [&](const CMatrix& op) { return op.transpose().cwiseProduct(rho).sum().real(); };
    Observables o;
    o.electron_x = tr(ex);
    o.electron_y = tr(ey);
    o.electron_z = tr(ez);
    o.nuclear_z.reserve(nz.size());
    for (const auto& op : nz) o.nuclear_z.push_back(tr(op));
    return o;
  }
};

struct Run {
  std::vector<Observables> observables;
  std::vector<QuantumState> states;
  InvariantReport invariants;
};

void check_invariants(const CMatrix& rho, double purity0, InvariantReport& report) {
  report.max_trace_error = std::max(report.max_trace_error, std::abs(rho.trace() - Complex{1.0, 0.0}));
  report.max_hermiticity_error =
      std::max(report.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = std::min(report.min_eigenvalue, solver.eigenvalues().minCoeff());
  report.max_purity_drift =
      std::max(report.max_purity_drift, std::abs((rho * rho).trace().real() - purity0));
}

Run integrate(const HamiltonianParts& parts, const SweepSchedule& schedule, const CMatrix& rho0,
              std::size_t steps_per_sample, std::size_t n_samples, bool store,
              const MeasurementOps& ops) {
  const double total_time = schedule.duration();
  const std::size_t total_steps = steps_per_sample * (n_samples - 1);
  const double dt = total_time / static_cast<double>(total_steps);
  const double purity0 = (rho0 * rho0).trace().real();

  Run run;
  run.observables.reserve(n_samples);
  run.invariants.min_eigenvalue = std::numeric_limits<double>::infinity();
  auto record = [&](const CMatrix& rho) {
    run.observables.push_back(ops.measure(rho));
    check_invariants(rho, purity0, run.invariants);
    if (store) run.states.push_back(QuantumState{rho, ElectronBasis::Z});
  };

  CMatrix rho = rho0;
  record(rho);

  const bool fixed = schedule.time_independent();
  CMatrix u;
  if (fixed) u = unitary_step(parts.at(schedule.amplitude(0.0), -schedule.detuning(0.0)), dt);

  std::size_t step = 0;
  for (std::size_t s = 1; s < n_samples; ++s) {
    for (std::size_t j = 0; j < steps_per_sample; ++j, ++step) {
      if (!fixed) {
        const double t_mid = (static_cast<double>(step) + 0.5) * dt;
        u = unitary_step(parts.at(schedule.amplitude(t_mid), -schedule.detuning(t_mid)), dt);
      }
      rho = u * rho * u.adjoint();
    }
    record(rho);
  }
  return run;
}

double max_change(const std::vector<Observables>& a, const std::vector<Observables>& b) {
  double change = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    change = std::max({change, std::abs(a[i].electron_x - b[i].electron_x),
                       std::abs(a[i].electron_y - b[i].electron_y),
                       std::abs(a[i].electron_z - b[i].electron_z)});
    for (std::size_t n = 0; n < a[i].nuclear_z.size(); ++n) {
      change = std::max(change, std::abs(a[i].nuclear_z[n] - b[i].nuclear_z[n]));
    }
  }
  return change;
}

std::vector<double> flatten(const std::vector<Observables>& obs) {
  std::vector<double> out;
  for (const auto& o : obs) {
    out.push_back(o.electron_x);
    out.push_back(o.electron_y);
    out.push_back(o.electron_z);
    out.insert(out.end(), o.nuclear_z.begin(), o.nuclear_z.end());
  }
  return out;
}

double angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

}  // namespace

bool InvariantReport::satisfied(double trace_tol, double eig_floor, double purity_tol) const noexcept {
  return max_trace_error <= trace_tol && min_eigenvalue >= eig_floor && max_purity_drift <= purity_tol &&
         max_hermiticity_error <= trace_tol;
}

void InvariantReport::merge(const InvariantReport& other) noexcept {
  max_trace_error = std::max(max_trace_error, other.max_trace_error);
  max_hermiticity_error = std::max(max_hermiticity_error, other.max_hermiticity_error);
  min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
  max_purity_drift = std::max(max_purity_drift, other.max_purity_drift);
}

std::vector<double> Trajectory::electron_x() const {
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto& o : observables) out.push_back(o.electron_x);
  return out;
}

std::vector<double> Trajectory::nuclear(std::size_t index) const {
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto& o : observables) out.push_back(o.nuclear_z.at(index));
  return out;
}

std::vector<double> Trajectory::total_nuclear() const {
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto& o : observables) out.push_back(o.total_nuclear());
  return out;
}

CMatrix unitary_step(const CMatrix& H, double dt) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(H);
  const Eigen::VectorXd& energies = solver.eigenvalues();
  Eigen::VectorXcd phases(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    phases(i) = std::exp(Complex{0.0, -energies(i) * dt});
  }
  const CMatrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Trajectory propagate(const SystemSpec& spec, const SweepSchedule& schedule, const QuantumState& rho0,
                     const PropagateOptions& options) {
  if (options.n_steps < 2) throw DomainError("propagate: n_steps must be at least 2");
  if (!(options.tol > 0.0)) throw DomainError("propagate: tol must be positive");
  if (options.n_samples < 2) throw DomainError("propagate: n_samples must be at least 2");
  if (static_cast<std::size_t>(rho0.dim()) != spec.dim()) {
    throw DomainError("propagate: state dimension does not match the system");
  }
  rho0.validate();

  const HamiltonianParts parts = hamiltonian_parts(spec, ElectronBasis::Z);
  const MeasurementOps ops(spec.k());
  const CMatrix rho_start = rho0.in_basis(ElectronBasis::Z).rho;

  const std::size_t intervals = options.n_samples - 1;
  std::size_t sps = std::max<std::size_t>(1, (options.n_steps + intervals - 1) / intervals);

  Run coarse = integrate(parts, schedule, rho_start, sps, options.n_samples, false, ops);
  for (std::size_t r = 1; r <= options.max_refinements; ++r) {
    sps *= 2;
    Run fine = integrate(parts, schedule, rho_start, sps, options.n_samples, options.store_states, ops);
    const double change = max_change(coarse.observables, fine.observables);
    if (change < options.tol) {
      Trajectory traj;
      traj.times.resize(options.n_samples);
      for (std::size_t s = 0; s < options.n_samples; ++s) {
        traj.times[s] = schedule.duration() * static_cast<double>(s) / static_cast<double>(intervals);
      }
      traj.states = std::move(fine.states);
      traj.observables = std::move(fine.observables);
      traj.certificate = ConvergenceCertificate{sps * intervals, r, change, options.tol};
      traj.invariants = fine.invariants;
      return traj;
    }
    if (r == options.max_refinements) {
      throw ConvergenceError("propagate: tolerance " + std::to_string(options.tol) +
                                 " not reached with " + std::to_string(sps * intervals) +
                                 " steps (last change " + std::to_string(change) + ")",
                             flatten(coarse.observables), flatten(fine.observables), sps * intervals,
                             change);
    }
    coarse = std::move(fine);
  }
  // max_refinements == 0
  throw ConvergenceError("propagate: no refinement allowed, convergence cannot be certified",
                         flatten(coarse.observables), flatten(coarse.observables),
                         sps * intervals, std::numeric_limits<double>::infinity());
}

AhpRotation simulate_ahp_rotation(double omega_1max_local, const SweepSchedule& schedule,
                                  const AhpOptions& options) {
  const auto* p = std::get_if<AhpParams>(&schedule.params());
  if (p == nullptr) throw DomainError("simulate_ahp_rotation: AHP schedule required");
  const SweepSchedule local = schedule.with_amplitude_scale(omega_1max_local / p->omega_1max);

  SystemSpec spec;
  if (options.full_system) {
    spec = *options.full_system;
  } else {
    spec.omega_0n = 1.0;  // no nuclei: never enters the Hamiltonian
  }
  spec.delta_omega0 = options.delta_omega0;

  const Trajectory traj = propagate(spec, local, initial_state(spec, ElectronAxis::Z), options.propagate);
  const Observables& end = traj.final();
  const double T = local.duration();

  AhpRotation out;
  out.bloch = {end.electron_x, end.electron_y, end.electron_z};
  out.field_axis =
      Eigen::Vector3d(local.amplitude(T), 0.0, options.delta_omega0 - local.detuning(T)).normalized();
  out.tip_from_x_deg = angle_deg(out.bloch, Eigen::Vector3d::UnitX());
  out.tip_from_axis_deg = angle_deg(out.bloch, out.field_axis);
  out.certificate = traj.certificate;
  out.invariants = traj.invariants;
  return out;
}

}  // namespace anovel
