#include "anovel/constants.hpp"

#include <cmath>

#include "anovel/errors.hpp"

namespace anovel {

void PhysConstants::validate() const {
  if (!(mu0 > 0.0 && hbar > 0.0 && kB > 0.0 && gamma_e > 0.0 && gamma_n > 0.0)) {
    throw DomainError("physical constants must be strictly positive");
  }
}

double PhysConstants::electron_nuclear_coupling(double R) const {
  if (!(R > 0.0)) throw DomainError("distance must be positive");
  return mu0 * gamma_e * gamma_n * hbar / (4.0 * std::numbers::pi * R * R * R);
}

double PhysConstants::nuclear_nuclear_coupling(double r) const {
  if (!(r > 0.0)) throw DomainError("distance must be positive");
  return mu0 * gamma_n * gamma_n * hbar / (4.0 * std::numbers::pi * r * r * r);
}

}  // namespace anovel
