#include "spinforce/kinematics.hpp"

#include <cmath>

#include "spinforce/errors.hpp"

namespace spinforce {

void VibrationModel::validate() const {
  if (!(d0 > 0.0)) throw DomainError("vibration: d0 must be > 0");
  if (!(amplitude >= 0.0)) throw DomainError("vibration: amplitude must be >= 0");
  if (!(omega > 0.0)) throw DomainError("vibration: omega must be > 0");
}

double VibrationModel::distance_at(double t) const {
  return d0 + amplitude * (1.0 + std::cos(omega * t));
}

double VibrationModel::velocity_at(double t) const {
  return amplitude * omega * std::sin(omega * t);
}

double VibrationModel::period() const { return 2.0 * M_PI / omega; }

void FieldTrace::validate() const {
  if (times.size() != values.size()) {
    throw DomainError("trace: times/values length mismatch");
  }
  if (times.size() < 2) throw DomainError("trace: need at least 2 samples");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw DomainError("trace: non-finite sample");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("trace: times must be strictly increasing");
    }
  }
}

FieldTrace beff_trace(const CouplingHypothesis& hyp,
                      const SourceGeometry& geometry,
                      const VibrationModel& vibration, double theta,
                      double t_start, double t_end, int n_samples,
                      const PhysicalConstants& pc,
                      const QuadratureOptions& opt) {
  hyp.validate();
  vibration.validate();
  pc.validate();
  if (n_samples < 2) throw DomainError("beff_trace: n_samples must be >= 2");
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    throw DomainError("beff_trace: window must be finite and increasing");
  }

  const DistanceProfile profile(hyp.lambda, geometry, vibration.d0,
                                vibration.d0 + 2.0 * vibration.amplitude, opt);
  const double prefactor =
      hyp.g_product / (2.0 * M_PI * pc.gamma_e) * std::cos(theta);

  FieldTrace trace;
  trace.parity = TraceParity::VelocityOdd;
  trace.times.resize(n_samples);
  trace.values.resize(n_samples);
  const double dt = (t_end - t_start) / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    const double t = t_start + i * dt;
    trace.times[i] = t;
    trace.values[i] =
        prefactor * profile(vibration.distance_at(t)) * vibration.velocity_at(t);
  }
  return trace;
}

}  // namespace spinforce
