#pragma once

namespace spinforce {

// Fundamental constants, SI units (CODATA 2018).
struct PhysicalConstants {
  double hbar = 1.054571817e-34;        // reduced Planck constant [J s]
  double c = 299792458.0;               // speed of light [m/s]
  double gamma_e = 1.76085963023e11;    // electron gyromagnetic ratio [rad s^-1 T^-1]
  double e_charge = 1.602176634e-19;    // elementary charge [C], J per eV
  double hbar_c_ev_m = 1.973269804e-7;  // hbar*c [eV m]

  static const PhysicalConstants& codata2018();

  // Throws DomainError unless all entries are strictly positive and
  // hbar_c_ev_m agrees with hbar*c/e_charge to 1e-9 relative.
  void validate() const;
};

}  // namespace spinforce
