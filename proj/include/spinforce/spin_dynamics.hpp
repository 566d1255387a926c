#pragma once

#include <cstdint>

#include "spinforce/kinematics.hpp"

namespace spinforce {

// Where the echo sequence starts relative to the vibration: PlusSync starts
// when the source passes the minimal distance (vibration phase pi), MinusSync
// at the maximal distance (vibration phase 0). The two variants accumulate
// anomalous phases of equal magnitude and opposite sign.
enum class SyncVariant { PlusSync, MinusSync };

enum class PhaseMethod { Analytic, TimeDomain };

// pi/2 - tau - pi - tau - pi/2 echo sequence.
struct SequenceConfig {
  double tau = 0.0;  // free-evolution window [s]
  SyncVariant variant = SyncVariant::MinusSync;
  double pi_half_duration = 0.0;       // s
  double pi_duration = 0.0;            // s
  double laser_init_duration = 0.0;    // s, metadata
  double laser_readout_duration = 0.0; // s, metadata
  double phi_mw = 0.0;                 // phase of the final pi/2 pulse [rad]
  // When set, no anomalous phase accrues during the microwave pulses and the
  // free windows shift by the pulse lengths (sync instant at the center of
  // the first pi/2 pulse). Baseline treats all pulses as instantaneous.
  bool finite_pulses = false;

  void validate() const;

  // Vibration phase at sequence t = 0 (PlusSync: pi, MinusSync: 0).
  double vibration_phase_at_start() const;
};

struct PhaseResult {
  double phi = 0.0;  // rad
  PhaseMethod method = PhaseMethod::Analytic;
};

struct PhaseOptions {
  int samples_per_tau = 4096;  // composite-Simpson intervals per window
  QuadratureOptions quad;
};

// Anomalous echo phase
//   phi = Int_0^tau gamma_e B_eff dt - Int_tau^2tau gamma_e B_eff dt
// with the vibration-phase origin set by the sequence variant, evaluated by
// composite Simpson integration. Independent of gamma_e (it cancels against
// the 1/gamma_e in B_eff) and linear in g_product.
PhaseResult accumulated_phase(
    const CouplingHypothesis& hyp, const SourceGeometry& geometry,
    const VibrationModel& vibration, double theta, const SequenceConfig& seq,
    const PhysicalConstants& pc = PhysicalConstants::codata2018(),
    const PhaseOptions& opt = {});

// Echo response of an arbitrary sampled trace (sequence clock):
//   Int_0^tau gamma_e B dt - Int_tau^2tau gamma_e B dt.
// The trace must be uniformly sampled from t = 0, cover [0, 2 tau], and have
// tau land on a sample. Static and position-even traces cancel; velocity-odd
// traces double the half-period integral.
double echo_response(const FieldTrace& trace, const SequenceConfig& seq,
                     const PhysicalConstants& pc = PhysicalConstants::codata2018());

struct Populations {
  double p_plus = 0.0;
  double p_minus = 0.0;
};

// P+ = [1 + cos(phi_mw + phi)]/2, P- = [1 + cos(phi_mw - phi)]/2.
// The interference observable is I = P+ - P- = -sin(phi_mw) sin(phi).
Populations populations(double phi, double phi_mw);

// Oracle for accumulated_phase: propagates a two-level state through the
// sequence with ideal rotations, treating gamma_e*B_eff(t) as the
// instantaneous detuning between the encoded levels, and extracts the
// anomalous phase from final-state populations. n_steps: total number of
// propagation steps across both free windows (>= 1000).
PhaseResult time_domain_phase(
    const CouplingHypothesis& hyp, const SourceGeometry& geometry,
    const VibrationModel& vibration, double theta, const SequenceConfig& seq,
    const PhysicalConstants& pc = PhysicalConstants::codata2018(),
    int n_steps = 10000, const QuadratureOptions& opt = {});

struct ReadoutSample {
  double intensity = 0.0;  // estimate of I = P+ - P-
  double std_error = 0.0;
};

// Shot-noise model of the photoluminescence readout. `shots` sequence
// repetitions are split evenly between the plus- and minus-synchronized
// runs; each run draws binomial counts with success probability
// q± = [1 ± contrast*I_true]/2 and the estimator divides the contrast back
// out, so the sample is unbiased and its standard error scales as
// 1/(contrast*sqrt(shots)). Deterministic for a fixed seed.
ReadoutSample simulate_readout(double i_true, std::uint64_t shots,
                               double contrast, std::uint64_t seed);

}  // namespace spinforce
