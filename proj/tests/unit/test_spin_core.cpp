#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "anovel/errors.hpp"
#include "anovel/operators.hpp"
#include "anovel/system.hpp"
#include "support/oracles.hpp"

using namespace anovel;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

const Complex I(0.0, 1.0);

}  // namespace

TEST_CASE("spin operators obey the angular momentum algebra", "[spin]") {
  using namespace spin;
  CHECK(max_abs(sx() * sy() - sy() * sx() - I * sz()) < 1e-15);
  CHECK(max_abs(sy() * sz() - sz() * sy() - I * sx()) < 1e-15);
  CHECK(max_abs(sz() * sx() - sx() * sz() - I * sy()) < 1e-15);
  CHECK(max_abs(sx() * sx() + sy() * sy() + sz() * sz() - 0.75 * CMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("X-basis operators equal the rotated Z-basis operators", "[spin]") {
  const CMatrix W = electron_basis_change(0);
  CHECK(max_abs(W.adjoint() * W - CMatrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(W.adjoint() * spin::sx() * W - spin::sx_in_x()) < 1e-15);
  CHECK(max_abs(W.adjoint() * spin::sy() * W - spin::sy_in_x()) < 1e-15);
  CHECK(max_abs(W.adjoint() * spin::sz() * W - spin::sz_in_x()) < 1e-15);
  // S_x is diagonal with |up>_X first.
  CHECK(spin::sx_in_x()(0, 0).real() == 0.5);
}

TEST_CASE("embedded operators act on the right factor", "[spin]") {
  const std::size_t k = 3;
  const CMatrix Se = electron_operator(spin::sz(), k);
  const CMatrix In = nuclear_operator(spin::sz(), 2, k);
  REQUIRE(Se.rows() == 16);
  // Electron is the most significant factor, nucleus 2 the least significant.
  CHECK(Se(0, 0).real() == 0.5);
  CHECK(Se(8, 8).real() == -0.5);
  CHECK(In(0, 0).real() == 0.5);
  CHECK(In(1, 1).real() == -0.5);
  CHECK(max_abs(Se * In - In * Se) == 0.0);
}

TEST_CASE("rotating-frame Hamiltonian", "[spin]") {
  SECTION("k = 1, A = C = 0, w1e = 0 is the nuclear Zeeman term only") {
    const double w0n = from_mhz(51.0);
    const OperatorMatrix H = build_rotating_hamiltonian(SystemSpec::single(w0n, 0.0), 0.0);
    CMatrix expected = w0n * nuclear_operator(spin::sz(), 0, 1);
    CHECK(max_abs(H.entries - expected) == 0.0);
  }
  SECTION("Hermitian with dimension 2^(k+1) for every k") {
    for (std::size_t k = 1; k <= kMaxNuclei; ++k) {
      SystemSpec spec;
      spec.omega_0n = from_mhz(50.0);
      spec.delta_omega0 = from_mhz(3.0);
      for (std::size_t i = 0; i < k; ++i) {
        NucleusSpec n;
        n.hyperfine = {from_mhz(1.0 + i), from_mhz(0.5 * i), 0.3 * i};
        spec.nuclei.push_back(n);
      }
      spec.dipolar = Eigen::MatrixXd::Constant(k, k, from_mhz(0.01));
      spec.dipolar.diagonal().setZero();
      const OperatorMatrix H = build_rotating_hamiltonian(spec, from_mhz(40.0));
      CHECK(H.dim() == static_cast<Eigen::Index>(std::size_t{2} << k));
      CHECK(H.hermiticity_error() < 1e-9);
    }
  }
  SECTION("the X-basis form is the rotated Z-basis form") {
    const SystemSpec spec = SystemSpec::single(from_mhz(51.0), from_mhz(5.1), from_mhz(2.0), from_mhz(1.0), 0.4);
    const CMatrix Hz = build_rotating_hamiltonian(spec, from_mhz(45.0)).entries;
    const CMatrix Hx = build_rotating_hamiltonian(spec, from_mhz(45.0), ElectronBasis::X).entries;
    const CMatrix W = electron_basis_change(1);
    CHECK(max_abs(W.adjoint() * Hz * W - Hx) < 1e-6);
  }
  SECTION("parts reassemble the Hamiltonian") {
    const SystemSpec spec = SystemSpec::single(from_mhz(51.0), from_mhz(5.1), from_mhz(2.0), from_mhz(1.0));
    const HamiltonianParts parts = hamiltonian_parts(spec);
    const CMatrix H = build_rotating_hamiltonian(spec, from_mhz(30.0)).entries;
    CHECK(max_abs(parts.at(from_mhz(30.0), 0.0) - H) < 1e-6);
  }
}

TEST_CASE("hyperfine from geometry", "[spin]") {
  const double R = 2e-10;
  const double b = kProtonConstants.electron_nuclear_coupling(R);
  // Independent arithmetic: mu0 gamma_e gamma_n hbar / (4 pi R^3).
  const PhysConstants& k = kProtonConstants;
  const double expected_b = k.mu0 * k.gamma_e * k.gamma_n * k.hbar / (4.0 * std::numbers::pi * R * R * R);
  CHECK_THAT(b, WithinRel(expected_b, 1e-14));
  CHECK_THAT(b, WithinRel(6.2093e7, 1e-3));

  SECTION("theta = 0: no mixing, C = 2b + Fzz") {
    const HyperfineParams hf = hyperfine_from_geometry({R, 0.0, 0.0}, 1e5);
    CHECK(std::abs(hf.A) < 1e-9 * b);
    CHECK_THAT(hf.C, WithinRel(2.0 * b + 1e5, 1e-14));
  }
  SECTION("theta = pi/2: C = -b") {
    const HyperfineParams hf = hyperfine_from_geometry({R, std::numbers::pi / 2, 0.0}, 0.0);
    CHECK(std::abs(hf.A) < 1e-9 * b);
    CHECK_THAT(hf.C, WithinRel(-b, 1e-14));
  }
  SECTION("theta = pi/4: A = 3b/2") {
    const HyperfineParams hf = hyperfine_from_geometry({R, std::numbers::pi / 4, 1.0}, 0.0);
    CHECK_THAT(hf.A, WithinRel(1.5 * b, 1e-14));
    CHECK(hf.phi_hf == 1.0);
  }
  SECTION("R <= 0 is a domain error") {
    CHECK_THROWS_AS(hyperfine_from_geometry({0.0, 0.0, 0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(kProtonConstants.electron_nuclear_coupling(-1.0), DomainError);
  }
}

TEST_CASE("dipolar couplings from positions", "[spin]") {
  using std::numbers::pi;
  const std::vector<SphericalPosition> positions{{3e-10, 0.0, 0.0}, {3e-10, pi / 2, 0.0}, {3e-10, pi / 2, pi / 2}};
  const Eigen::MatrixXd d = dipolar_from_positions(positions);
  REQUIRE(d.rows() == 3);
  CHECK(d.isApprox(d.transpose()));
  CHECK(d.diagonal().isZero());
  // Nuclei 1 and 2 lie in the xy plane: the internuclear vector is perpendicular to z.
  const Eigen::Vector3d r12 = positions[1].cartesian() - positions[2].cartesian();
  const double b12 = kProtonConstants.nuclear_nuclear_coupling(r12.norm());
  CHECK_THAT(d(1, 2), WithinRel(0.5 * b12, 1e-12));

  SECTION("magic angle separation gives no coupling") {
    const double magic = std::acos(1.0 / std::sqrt(3.0));
    const SphericalPosition origin{1e-10, 0.0, 0.0};
    const Eigen::Vector3d step(std::sin(magic) * 2e-10, 0.0, std::cos(magic) * 2e-10);
    const Eigen::Vector3d p = origin.cartesian() + step;
    const SphericalPosition second{p.norm(), std::acos(p.z() / p.norm()), 0.0};
    const std::vector<SphericalPosition> pair{origin, second};
    CHECK(std::abs(dipolar_from_positions(pair)(0, 1)) < 1e-6);
  }
}

TEST_CASE("system validation names the offending field", "[spin]") {
  auto path_of = [](const SystemSpec& s) {
    try {
      s.validate();
    } catch (const ValidationError& e) {
      return e.path();
    }
    return std::string("<none>");
  };
  SystemSpec ok = SystemSpec::single(from_mhz(50.0), from_mhz(5.0));
  CHECK(path_of(ok) == "<none>");

  SystemSpec s = ok;
  s.omega_0n = -1.0;
  CHECK(path_of(s) == "omega_0n");

  s = ok;
  s.nuclei[0].hyperfine.phi_hf = 7.0;
  CHECK(path_of(s) == "nuclei[0].phi_hf");

  s = ok;
  s.nuclei[0].hyperfine.A = std::nan("");
  CHECK(path_of(s) == "nuclei[0].A");

  s = ok;
  s.nuclei.resize(kMaxNuclei + 1);
  CHECK(path_of(s) == "nuclei");

  s = ok;
  s.nuclei.resize(2);
  s.dipolar = Eigen::MatrixXd::Zero(2, 2);
  s.dipolar(0, 1) = 1.0;
  CHECK(path_of(s) == "dipolar");

  s = ok;
  s.nuclei[0].position = SphericalPosition{2e-10, 0.3, 0.0};
  CHECK(path_of(s) == "nuclei[0].hyperfine");
}

TEST_CASE("thermal polarization", "[spin]") {
  const double pe = thermal_polarization(kProtonConstants.gamma_e * 1.2, 0.3);
  const double pn = thermal_polarization(kProtonConstants.gamma_n * 1.2, 0.3);
  const PhysConstants& k = kProtonConstants;
  CHECK_THAT(pe, WithinRel(std::tanh(k.hbar * k.gamma_e * 1.2 / (2.0 * k.kB * 0.3)), 1e-15));
  CHECK(pe > 0.97);
  CHECK(pe < 0.995);
  CHECK(pn > 0.002);
  CHECK(pn < 0.005);
  CHECK(thermal_polarization(1e9, 1e-6) == 1.0);
  CHECK_THROWS_AS(thermal_polarization(1e9, 0.0), DomainError);
  CHECK_THROWS_AS(thermal_polarization(1e9, -1.0), DomainError);
}

TEST_CASE("prepared states", "[spin]") {
  SystemSpec spec = SystemSpec::single(from_mhz(50.0), from_mhz(5.0));
  spec.nuclei.push_back(spec.nuclei[0]);

  for (ElectronAxis axis : {ElectronAxis::X, ElectronAxis::Z}) {
    const QuantumState s = initial_state(spec, axis);
    REQUIRE(s.dim() == 8);
    CHECK_NOTHROW(s.validate());
    CHECK_THAT(s.rho.trace().real(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(s.purity(), WithinAbs(0.25, 1e-15));
    const Observables o = observables(s);
    CHECK_THAT(axis == ElectronAxis::X ? o.electron_x : o.electron_z, WithinAbs(1.0, 1e-15));
    CHECK_THAT(o.total_nuclear(), WithinAbs(0.0, 1e-15));
  }

  SECTION("basis round trip") {
    const QuantumState s = initial_state_along(spec, 0.7, 1.1);
    const QuantumState back = s.in_basis(ElectronBasis::X).in_basis(ElectronBasis::Z);
    CHECK(max_abs(back.rho - s.rho) < 1e-15);
    const Observables o = observables(s.in_basis(ElectronBasis::X));
    CHECK_THAT(o.electron_z, WithinAbs(std::cos(0.7), 1e-14));
    CHECK_THAT(o.electron_x, WithinAbs(std::sin(0.7) * std::cos(1.1), 1e-14));
  }

  SECTION("validation rejects unphysical matrices") {
    QuantumState bad = initial_state(spec, ElectronAxis::X);
    bad.rho *= 2.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    QuantumState neg{CMatrix::Zero(4, 4), ElectronBasis::Z};
    neg.rho(0, 0) = 1.5;
    neg.rho(1, 1) = -0.5;
    CHECK_THROWS_AS(neg.validate(), DomainError);
  }
}

TEST_CASE("block operators", "[spin]") {
  const BlockOperators& b = block_operators();
  CHECK(max_abs(b.projector_dq + b.projector_zq - CMatrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs(b.projector_dq * b.projector_zq) == 0.0);
  CHECK(b.projector_dq(0, 0).real() == 1.0);
  CHECK(b.projector_dq(3, 3).real() == 1.0);
  CHECK(b.projector_zq(1, 1).real() == 1.0);
  CHECK(b.projector_zq(2, 2).real() == 1.0);
  CHECK(max_abs(b.sigma_x_zq * b.sigma_x_zq - b.projector_zq) == 0.0);
  CHECK(max_abs(b.sigma_z_dq * b.sigma_z_dq - b.projector_dq) == 0.0);

  // Without C and offset the X-basis Hamiltonian has exactly this block form.
  const double w0n = from_mhz(51.0);
  const double A = 0.1 * w0n;
  const double w1e = 0.9 * w0n;
  const CMatrix H = build_rotating_hamiltonian(SystemSpec::single(w0n, A), w1e, ElectronBasis::X).entries;
  const CMatrix expected = 0.5 * (w1e + w0n) * b.sigma_z_dq + 0.25 * A * b.sigma_x_dq +
                           0.5 * (w1e - w0n) * b.sigma_z_zq + 0.25 * A * b.sigma_x_zq;
  CHECK(max_abs(H - expected) < 1e-7);
}
