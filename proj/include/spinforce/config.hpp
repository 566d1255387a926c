#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinforce/inference.hpp"

namespace spinforce {

// Experiment definition parsed from a JSON config file. Keys carry explicit
// unit suffixes (d0_um, amplitude_nm, tau_us, frequency_khz, ...); the struct
// stores those values verbatim so the canonical serialization round-trips
// byte-exactly, and converts to SI only in setup(). Unknown keys are
// rejected; missing keys fall back to the documented nominal defaults.
struct ExperimentConfig {
  // geometry
  double radius_um = 250.0;
  double thickness_um = 250.0;
  double rho_per_m3 = 1.33e30;
  double offset_x_um = 0.0;
  double offset_y_um = 0.0;
  // vibration
  double d0_um = 2.0;
  double amplitude_nm = 165.2;
  double frequency_khz = 74.452;
  // sensor
  double theta_deg = 54.7356;
  double tau_us = 6.652;
  double pi_half_ns = 64.0;
  double pi_ns = 127.0;
  double laser_init_us = 2.0;
  double laser_readout_us = 4.4;
  double contrast = 0.1304;  // calibrated so sigma_phi(6e7 shots) = 0.0014
  double shots = 6.0e7;
  std::string variant = "minus";  // "plus" | "minus"
  bool finite_pulses = false;
  // hypothesis
  std::vector<double> lambda_um = {200.0};
  double g_product = 1.0;
  // analysis
  double cl = 0.95;
  double quad_rel_tol = 1e-7;
  int samples_per_tau = 4096;
  int time_domain_steps = 10000;
  std::uint64_t seed = 1;
  double phi_central_rad = 0.0011;
  double sigma_stat_rad = 0.0014;
  // budget (parameter uncertainties propagated to the coupling)
  double sigma_theta_deg = 0.6;
  double sigma_d0_um = 0.1;
  double sigma_diameter_um = 2.5;
  double sigma_thickness_um = 35.0;
  double sigma_amplitude_nm = 0.1;
  double xy_center_um = 1.3;  // measured misalignment (analysis assumes 0)
  double xy_sigma_um = 0.8;

  static ExperimentConfig defaults() { return {}; }

  // Throws ConfigError with the offending key path on unknown keys, type
  // mismatches or invalid values; IoError when the file cannot be read.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  // Canonical JSON rendering of the effective (defaults-merged) config.
  std::string to_json() const;

  // FNV-1a hash of the canonical rendering.
  std::uint64_t hash() const;

  void validate() const;

  // SI quantities for the computation layer.
  ExperimentSetup setup() const;
  std::vector<double> lambdas_m() const;
  PhaseEstimate measured() const;
  std::vector<BudgetParameter> budget_parameters() const;
};

}  // namespace spinforce
