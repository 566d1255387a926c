#include "spinforce/source_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinforce/errors.hpp"

namespace spinforce {

SourceGeometry SourceGeometry::half_sphere(double radius,
                                           double number_density) {
  SourceGeometry g;
  g.radius = radius;
  g.thickness = radius;
  g.number_density = number_density;
  return g;
}

void SourceGeometry::validate() const {
  if (!(radius > 0.0)) throw DomainError("geometry: radius must be > 0");
  if (!(thickness > 0.0) || thickness > 2.0 * radius) {
    throw DomainError("geometry: thickness must lie in (0, 2*radius]");
  }
  if (!(number_density >= 0.0)) {
    throw DomainError("geometry: number density must be >= 0");
  }
  if (!std::isfinite(offset_x) || !std::isfinite(offset_y)) {
    throw DomainError("geometry: lateral offset must be finite");
  }
}

bool SourceGeometry::closed_form_valid() const {
  return thickness == radius && on_axis();
}

void CouplingHypothesis::validate() const {
  if (!(lambda > 0.0)) throw DomainError("hypothesis: lambda must be > 0");
  if (!std::isfinite(g_product)) {
    throw DomainError("hypothesis: g_product must be finite");
  }
}

double CouplingHypothesis::boson_mass_ev(const PhysicalConstants& pc) const {
  validate();
  return pc.hbar_c_ev_m / lambda;
}

double point_kernel(double r, double lambda) {
  if (!(r > 0.0)) throw DomainError("point_kernel: r must be > 0");
  if (!(lambda > 0.0)) throw DomainError("point_kernel: lambda must be > 0");
  return std::exp(-r / lambda) / r;
}

double f_closed_form(double lambda, const SourceGeometry& geometry, double d) {
  geometry.validate();
  if (!(lambda > 0.0)) throw DomainError("f_closed_form: lambda must be > 0");
  if (!(d > 0.0)) throw DomainError("f_closed_form: d must be > 0");
  if (!geometry.closed_form_valid()) {
    throw DomainError(
        "f_closed_form: valid only for the on-axis half-sphere "
        "(thickness == radius, zero offset); use f_quadrature");
  }
  const double R = geometry.radius;
  const double big = std::hypot(R, d + R);
  // The two e^{-d/lambda} terms of the raw expression are combined into
  // (R - lambda)/(d + R) to avoid cancellation when lambda ~ R.
  const double bracket = (R - lambda) / (d + R) * std::exp(-d / lambda) -
                         std::exp(-(d + R) / lambda) +
                         (big + lambda) / (d + R) * std::exp(-big / lambda);
  return 2.0 * M_PI * geometry.number_density * lambda * lambda * bracket;
}

QuadratureResult f_quadrature(double lambda, const SourceGeometry& geometry,
                              double d, const QuadratureOptions& opt) {
  geometry.validate();
  if (!(lambda > 0.0)) throw DomainError("f_quadrature: lambda must be > 0");
  if (!(d > 0.0)) throw DomainError("f_quadrature: d must be > 0");

  const double R = geometry.radius;
  const double rho = geometry.number_density;
  if (rho == 0.0) return {0.0, 0.0, 0};

  // Material more than ~35 screening lengths above the near face contributes
  // a relative e^-35 ~ 1e-15 and is dropped; the bound on the discarded part
  // goes into the reported error. This keeps short-range evaluations from
  // resolving exponentially dead volume.
  const double t_full = geometry.thickness;
  const double t_eff = std::min(t_full, 35.0 * lambda);
  double truncation_bound = 0.0;
  if (t_eff < t_full) {
    truncation_bound = rho * M_PI * R * R * (t_full - t_eff) *
                       std::exp(-(d + t_eff) / lambda) / (d + t_eff);
  }

  // The clipped sphere is parametrized by the polar angle beta from its
  // lowest point (height z = d + R(1 - cos beta), slice radius R sin beta)
  // and the scaled slice coordinate u in [0, 1]; the integrand is smooth on
  // the resulting box, so the tensor rules converge fast.
  const double beta_max = std::acos(1.0 - t_eff / R);
  const double inv_lambda = 1.0 / lambda;

  QuadratureResult inner;
  if (geometry.on_axis()) {
    auto integrand = [&](const double* x) {
      const double u = x[0], beta = x[1];
      const double sb = std::sin(beta);
      const double z = d + R * (1.0 - std::cos(beta));
      const double s = R * sb * u;
      const double r = std::hypot(s, z);
      return sb * sb * sb * u * std::exp(-r * inv_lambda) / r;
    };
    const double lo[2] = {0.0, 0.0};
    const double hi[2] = {1.0, beta_max};
    inner = integrate_adaptive(integrand, lo, hi, 2, opt);
    const double scale = 2.0 * M_PI * rho * R * R * R;
    inner.value *= scale;
    inner.abs_error *= scale;
  } else {
    const double ox = geometry.offset_x, oy = geometry.offset_y;
    const double o2 = ox * ox + oy * oy;
    auto integrand = [&](const double* x) {
      const double u = x[0], phi = x[1], beta = x[2];
      const double sb = std::sin(beta);
      const double z = d + R * (1.0 - std::cos(beta));
      const double s = R * sb * u;
      const double r = std::sqrt(s * s + 2.0 * s * (ox * std::cos(phi) + oy * std::sin(phi)) +
                                 o2 + z * z);
      return sb * sb * sb * u * std::exp(-r * inv_lambda) / r;
    };
    const double lo[3] = {0.0, 0.0, 0.0};
    const double hi[3] = {1.0, 2.0 * M_PI, beta_max};
    inner = integrate_adaptive(integrand, lo, hi, 3, opt);
    const double scale = rho * R * R * R;
    inner.value *= scale;
    inner.abs_error *= scale;
  }
  inner.abs_error += truncation_bound;
  return inner;
}

double f_value(double lambda, const SourceGeometry& geometry, double d,
               const QuadratureOptions& opt) {
  if (geometry.closed_form_valid()) return f_closed_form(lambda, geometry, d);
  return f_quadrature(lambda, geometry, d, opt).value;
}

double effective_field(const CouplingHypothesis& hyp,
                       const SourceGeometry& geometry, double d, double v,
                       double theta, const PhysicalConstants& pc,
                       const QuadratureOptions& opt) {
  hyp.validate();
  pc.validate();
  if (!(d > 0.0)) throw DomainError("effective_field: d must be > 0");
  if (hyp.g_product == 0.0 || v == 0.0) return 0.0;
  const double f = f_value(hyp.lambda, geometry, d, opt);
  return hyp.g_product / (2.0 * M_PI * pc.gamma_e) * f * v * std::cos(theta);
}

DistanceProfile::DistanceProfile(double lambda, const SourceGeometry& geometry,
                                 double d_min, double d_max,
                                 const QuadratureOptions& opt) {
  if (!(d_min > 0.0) || d_max < d_min) {
    throw DomainError("DistanceProfile: need 0 < d_min <= d_max");
  }
  mid_ = 0.5 * (d_min + d_max);
  half_ = 0.5 * (d_max - d_min);
  if (half_ == 0.0) {
    nodes_ = {mid_};
    values_ = {f_value(lambda, geometry, mid_, opt)};
    return;
  }
  // Node count follows the window-to-range ratio; the interpolation error of
  // an analytic integrand drops geometrically and stays far below the
  // quadrature tolerance for these counts.
  const double variation = (d_max - d_min) / lambda;
  const int n = variation <= 0.5 ? 16 : (variation <= 5.0 ? 32 : 64);
  nodes_.resize(n);
  values_.resize(n);
  for (int k = 0; k < n; ++k) {
    const double angle = M_PI * (2.0 * k + 1.0) / (2.0 * n);
    nodes_[k] = mid_ + half_ * std::cos(angle);
    values_[k] = f_value(lambda, geometry, nodes_[k], opt);
  }
}

double DistanceProfile::operator()(double d) const {
  if (values_.size() == 1) return values_[0];
  const double slack = 1e-9 * (half_ + std::abs(mid_));
  if (d < mid_ - half_ - slack || d > mid_ + half_ + slack) {
    throw DomainError("DistanceProfile: evaluation outside window");
  }
  // Barycentric interpolation at Chebyshev points of the first kind:
  // weights (-1)^k sin((2k+1) pi / (2n)).
  const int n = static_cast<int>(values_.size());
  double num = 0.0, den = 0.0;
  for (int k = 0; k < n; ++k) {
    const double diff = d - nodes_[k];
    if (diff == 0.0) return values_[k];
    double w = std::sin(M_PI * (2.0 * k + 1.0) / (2.0 * n)) / diff;
    if (k & 1) w = -w;
    num += w * values_[k];
    den += w;
  }
  return num / den;
}

}  // namespace spinforce
