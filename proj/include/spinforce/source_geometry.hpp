#pragma once

#include <vector>

#include "spinforce/constants.hpp"
#include "spinforce/quadrature.hpp"

namespace spinforce {

// Nucleon source: a sphere of radius `radius` resting with its lowest point
// at height d above the sensor plane (sphere center on the lens axis at
// height d + radius), clipped to heights [d, d + thickness]. thickness ==
// radius is the exact half-sphere with the curved face toward the sensor and
// the flat face at d + radius. The sensor sits at the origin, displaced from
// the lens axis by (offset_x, offset_y).
struct SourceGeometry {
  double radius = 0.0;          // m
  double thickness = 0.0;       // m, in (0, 2*radius]
  double number_density = 0.0;  // nucleons per m^3
  double offset_x = 0.0;        // m
  double offset_y = 0.0;        // m

  static SourceGeometry half_sphere(double radius, double number_density);

  void validate() const;  // throws DomainError on violated invariants

  bool on_axis() const { return offset_x == 0.0 && offset_y == 0.0; }
  // True when the closed-form f applies (exact half-sphere, on axis).
  bool closed_form_valid() const;
};

// One coupling hypothesis: force range and coupling-product strength.
struct CouplingHypothesis {
  double lambda = 0.0;  // force range [m]
  double g_product = 0.0;

  void validate() const;
  // Mediator mass [eV] equivalent to lambda.
  double boson_mass_ev(
      const PhysicalConstants& pc = PhysicalConstants::codata2018()) const;
};

// Screened point kernel e^(-r/lambda)/r [1/m]. r, lambda > 0.
double point_kernel(double r, double lambda);

// Closed-form f(lambda, R, d) [1/m] for the exact on-axis half-sphere.
// Throws DomainError when geometry.closed_form_valid() is false (use
// f_quadrature for truncated or laterally offset sources) or d <= 0.
double f_closed_form(double lambda, const SourceGeometry& geometry, double d);

// Volumetric evaluation of rho * Int_V e^(-r/lambda)/r dV over the clipped
// sphere, by adaptive quadrature: axisymmetric 2D reduction on axis, full 3D
// otherwise. Independent of the closed form's derivation.
QuadratureResult f_quadrature(double lambda, const SourceGeometry& geometry,
                              double d, const QuadratureOptions& opt = {});

// Closed form when valid, quadrature value otherwise.
double f_value(double lambda, const SourceGeometry& geometry, double d,
               const QuadratureOptions& opt = {});

// Effective field along the NV axis [T]:
//   B_eff = g/(2 pi gamma_e) * f(lambda, geometry, d) * v * cos(theta).
// Odd in v, linear in g_product.
double effective_field(
    const CouplingHypothesis& hyp, const SourceGeometry& geometry, double d,
    double v, double theta,
    const PhysicalConstants& pc = PhysicalConstants::codata2018(),
    const QuadratureOptions& opt = {});

// Chebyshev interpolant of f(d) over a distance window [d_min, d_max].
// The phase integrals sample f thousands of times per period over a window
// of width 2A << d; interpolating from a few nodes makes quadrature-backed
// geometries affordable without altering the integration scheme. Node count
// scales with (d_max - d_min)/lambda; interpolation error is far below the
// quadrature tolerance (validated in the test suite).
class DistanceProfile {
 public:
  DistanceProfile(double lambda, const SourceGeometry& geometry, double d_min,
                  double d_max, const QuadratureOptions& opt = {});

  // f at distance d; d must lie inside the construction window.
  double operator()(double d) const;

  int node_count() const { return static_cast<int>(values_.size()); }

 private:
  double mid_ = 0.0;
  double half_ = 0.0;
  std::vector<double> nodes_;   // Chebyshev abscissae (first kind)
  std::vector<double> values_;  // f at nodes
};

}  // namespace spinforce
