#include "spinforce/constants.hpp"

#include <cmath>

#include "spinforce/errors.hpp"

namespace spinforce {

const PhysicalConstants& PhysicalConstants::codata2018() {
  static const PhysicalConstants pc{};
  return pc;
}

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !(c > 0.0) || !(gamma_e > 0.0) || !(e_charge > 0.0) ||
      !(hbar_c_ev_m > 0.0)) {
    throw DomainError("physical constants must be strictly positive");
  }
  const double derived = hbar * c / e_charge;
  if (std::abs(derived - hbar_c_ev_m) > 1e-9 * hbar_c_ev_m) {
    throw DomainError("hbar_c inconsistent with hbar*c");
  }
}

}  // namespace spinforce
