#pragma once

#include <vector>

#include "spinforce/source_geometry.hpp"

namespace spinforce {

// Vertical vibration of the source: d(t) = d0 + A*(1 + cos(omega*t)), so the
// distance is maximal at t = 0 and minimal at t = pi/omega. The velocity
// convention is v(t) = +A*omega*sin(omega*t) (= -d'(t)); the sign is a fixed
// convention and all derived bounds are invariant under flipping it.
struct VibrationModel {
  double d0 = 0.0;         // minimal distance [m]
  double amplitude = 0.0;  // A [m]
  double omega = 0.0;      // angular frequency [rad/s]

  void validate() const;

  double distance_at(double t) const;
  double velocity_at(double t) const;
  double period() const;
};

enum class TraceParity { PositionEven, VelocityOdd, Custom };

// Sampled effective-field history on a strictly increasing time grid.
struct FieldTrace {
  std::vector<double> times;   // s
  std::vector<double> values;  // T
  TraceParity parity = TraceParity::Custom;

  void validate() const;
};

// Samples B_eff(d(t), v(t)) on a uniform grid of n_samples points spanning
// [t_start, t_end]; tagged velocity-odd.
FieldTrace beff_trace(const CouplingHypothesis& hyp,
                      const SourceGeometry& geometry,
                      const VibrationModel& vibration, double theta,
                      double t_start, double t_end, int n_samples,
                      const PhysicalConstants& pc = PhysicalConstants::codata2018(),
                      const QuadratureOptions& opt = {});

}  // namespace spinforce
