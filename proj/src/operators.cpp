#include "anovel/operators.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "anovel/errors.hpp"

namespace anovel {

namespace {

constexpr Complex kI{0.0, 1.0};

CMatrix embed(const Eigen::Matrix2cd& op, std::size_t site, std::size_t n_sites) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t s = 0; s < n_sites; ++s) {
    const CMatrix factor = (s == site) ? CMatrix(op) : CMatrix(CMatrix::Identity(2, 2));
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

std::size_t log2_dim(Eigen::Index dim) {
  std::size_t bits = 0;
  while ((Eigen::Index{1} << bits) < dim) ++bits;
  return bits;
}

double trace_product(const CMatrix& op, const CMatrix& rho) {
  // Tr[op rho] for Hermitian op and rho is real.
  return (op.transpose().cwiseProduct(rho)).sum().real();
}

}  // namespace

double OperatorMatrix::hermiticity_error() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

std::size_t QuantumState::n_nuclei() const { return log2_dim(rho.rows()) - 1; }

void QuantumState::validate(double tol) const {
  const auto d = rho.rows();
  if (d < 2 || rho.cols() != d || (Eigen::Index{1} << log2_dim(d)) != d) {
    throw DomainError("state dimension must be a power of two >= 2");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw DomainError("state is not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > tol) throw DomainError("state trace is not 1");
  if (min_eigenvalue() < -tol) throw DomainError("state has a negative eigenvalue");
}

QuantumState QuantumState::in_basis(ElectronBasis target) const {
  if (target == basis) return *this;
  const CMatrix w = electron_basis_change(n_nuclei());
  // W is real symmetric and its own inverse, so both directions are W rho W.
  return QuantumState{w * rho * w, target};
}

double QuantumState::purity() const { return (rho * rho).trace().real(); }

double QuantumState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

namespace spin {
Eigen::Matrix2cd sx() {
  Eigen::Matrix2cd m;
  m << 0.0, 0.5, 0.5, 0.0;
  return m;
}
Eigen::Matrix2cd sy() {
  Eigen::Matrix2cd m;
  m << 0.0, -0.5 * kI, 0.5 * kI, 0.0;
  return m;
}
Eigen::Matrix2cd sz() {
  Eigen::Matrix2cd m;
  m << 0.5, 0.0, 0.0, -0.5;
  return m;
}
Eigen::Matrix2cd sx_in_x() { return sz(); }
Eigen::Matrix2cd sy_in_x() { return -sy(); }
Eigen::Matrix2cd sz_in_x() { return sx(); }
}  // namespace spin

CMatrix electron_operator(const Eigen::Matrix2cd& op, std::size_t k) { return embed(op, 0, k + 1); }

CMatrix nuclear_operator(const Eigen::Matrix2cd& op, std::size_t index, std::size_t k) {
  return embed(op, index + 1, k + 1);
}

CMatrix electron_basis_change(std::size_t k) {
  const double h = std::numbers::sqrt2 / 2.0;
  Eigen::Matrix2cd w;
  w << h, h, h, -h;
  return electron_operator(w, k);
}

CMatrix HamiltonianParts::at(double amplitude, double offset) const {
  return fixed + amplitude * electron_x + offset * electron_z;
}

HamiltonianParts hamiltonian_parts(const SystemSpec& spec, ElectronBasis basis) {
  spec.validate();
  const std::size_t k = spec.k();
  const bool xb = basis == ElectronBasis::X;
  const Eigen::Matrix2cd esx = xb ? spin::sx_in_x() : spin::sx();
  const Eigen::Matrix2cd esz = xb ? spin::sz_in_x() : spin::sz();

  HamiltonianParts parts;
  parts.basis = basis;
  parts.electron_x = electron_operator(esx, k);
  parts.electron_z = electron_operator(esz, k);
  parts.fixed = spec.delta_omega0 * parts.electron_z;

  std::vector<CMatrix> ix(k), iy(k), iz(k);
  for (std::size_t i = 0; i < k; ++i) {
    ix[i] = nuclear_operator(spin::sx(), i, k);
    iy[i] = nuclear_operator(spin::sy(), i, k);
    iz[i] = nuclear_operator(spin::sz(), i, k);
  }

  for (std::size_t i = 0; i < k; ++i) {
    const HyperfineParams& hf = spec.nuclei[i].hyperfine;
    parts.fixed += spec.omega_0n * iz[i];
    const CMatrix transverse = std::cos(hf.phi_hf) * ix[i] + std::sin(hf.phi_hf) * iy[i];
    parts.fixed += parts.electron_z * (hf.A * transverse + hf.C * iz[i]);
  }

  if (spec.dipolar.size() != 0) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const double d = spec.dipolar(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (d == 0.0) continue;
        // 3 IzIz - I.I = 2 IzIz - IxIx - IyIy
        parts.fixed += d * (2.0 * iz[i] * iz[j] - ix[i] * ix[j] - iy[i] * iy[j]);
      }
    }
  }
  return parts;
}

OperatorMatrix build_rotating_hamiltonian(const SystemSpec& spec, double omega_1e,
                                          ElectronBasis basis) {
  const HamiltonianParts parts = hamiltonian_parts(spec, basis);
  return OperatorMatrix{parts.at(omega_1e, 0.0), basis, true};
}

QuantumState initial_state(const SystemSpec& spec, ElectronAxis axis) {
  return axis == ElectronAxis::Z ? initial_state_along(spec, 0.0)
                                 : initial_state_along(spec, std::numbers::pi / 2.0);
}

QuantumState initial_state_along(const SystemSpec& spec, double polar, double azimuth) {
  const std::size_t k = spec.k();
  Eigen::Vector2cd psi;
  psi << std::cos(polar / 2.0), std::exp(kI * azimuth) * std::sin(polar / 2.0);
  CMatrix electron = psi * psi.adjoint();
  CMatrix nuclear = CMatrix::Identity(1 << k, 1 << k) / static_cast<double>(1 << k);
  return QuantumState{Eigen::kroneckerProduct(electron, nuclear).eval(), ElectronBasis::Z};
}

double Observables::total_nuclear() const {
  double s = 0.0;
  for (double v : nuclear_z) s += v;
  return s;
}

Observables observables(const QuantumState& state) {
  const std::size_t k = state.n_nuclei();
  const bool xb = state.basis == ElectronBasis::X;
  Observables obs;
  obs.electron_x = 2.0 * trace_product(electron_operator(xb ? spin::sx_in_x() : spin::sx(), k), state.rho);
  obs.electron_y = 2.0 * trace_product(electron_operator(xb ? spin::sy_in_x() : spin::sy(), k), state.rho);
  obs.electron_z = 2.0 * trace_product(electron_operator(xb ? spin::sz_in_x() : spin::sz(), k), state.rho);
  obs.nuclear_z.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    obs.nuclear_z[i] = 2.0 * trace_product(nuclear_operator(spin::sz(), i, k), state.rho);
  }
  return obs;
}

const BlockOperators& block_operators() {
  static const BlockOperators ops = [] {
    auto ket = [](int i) {
      Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
      v(i) = 1.0;
      return v;
    };
    auto outer = [&](int i, int j) -> CMatrix { return ket(i) * ket(j).adjoint(); };
    // 0: |up Up>, 1: |up Down>, 2: |down Up>, 3: |down Down>
    BlockOperators b;
    b.projector_dq = outer(0, 0) + outer(3, 3);
    b.projector_zq = outer(1, 1) + outer(2, 2);
    b.sigma_z_dq = outer(0, 0) - outer(3, 3);
    b.sigma_x_dq = outer(0, 3) + outer(3, 0);
    b.sigma_z_zq = outer(1, 1) - outer(2, 2);
    b.sigma_x_zq = outer(1, 2) + outer(2, 1);
    return b;
  }();
  return ops;
}

}  // namespace anovel
