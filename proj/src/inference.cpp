#include "spinforce/inference.hpp"

#include <algorithm>
#include <cmath>

#include "spinforce/errors.hpp"

namespace spinforce {

namespace {

void check_cl(double cl) {
  if (!(cl > 0.5) || !(cl < 1.0)) {
    throw DomainError("confidence level must lie in (0.5, 1)");
  }
}

void check_estimate(const PhaseEstimate& est) {
  if (!std::isfinite(est.phi_central) || !std::isfinite(est.sigma_stat) ||
      est.sigma_stat < 0.0) {
    throw DomainError("phase estimate must be finite with sigma_stat >= 0");
  }
}

double nominal_parameter_value(BudgetParameterKind kind,
                               const ExperimentSetup& setup) {
  switch (kind) {
    case BudgetParameterKind::Theta:
      return setup.theta;
    case BudgetParameterKind::MinDistance:
      return setup.vibration.d0;
    case BudgetParameterKind::Diameter:
      return 2.0 * setup.geometry.radius;
    case BudgetParameterKind::Thickness:
      return setup.geometry.thickness;
    case BudgetParameterKind::Amplitude:
      return setup.vibration.amplitude;
    case BudgetParameterKind::LateralOffset:
      return std::hypot(setup.geometry.offset_x, setup.geometry.offset_y);
  }
  throw DomainError("unknown budget parameter kind");
}

ExperimentSetup perturbed_setup(BudgetParameterKind kind,
                                const ExperimentSetup& setup, double value) {
  ExperimentSetup out = setup;
  switch (kind) {
    case BudgetParameterKind::Theta:
      out.theta = value;
      break;
    case BudgetParameterKind::MinDistance:
      out.vibration.d0 = value;
      break;
    case BudgetParameterKind::Diameter:
      out.geometry.radius = 0.5 * value;
      break;
    case BudgetParameterKind::Thickness:
      out.geometry.thickness = value;
      break;
    case BudgetParameterKind::Amplitude:
      out.vibration.amplitude = value;
      break;
    case BudgetParameterKind::LateralOffset:
      // f depends on the offset magnitude only
      out.geometry.offset_x = std::abs(value);
      out.geometry.offset_y = 0.0;
      break;
  }
  return out;
}

Budget budget_with_transfer(double lambda, const ExperimentSetup& setup,
                            const PhaseEstimate& est, double cl,
                            std::span<const BudgetParameter> params,
                            double* k_out) {
  check_cl(cl);
  check_estimate(est);
  std::vector<BudgetParameter> defaults;
  if (params.empty()) {
    defaults = standard_budget_parameters();
    params = defaults;
  }

  // Magnitudes throughout: the phase sign is a sync-variant convention and
  // the corrections must not depend on it.
  const double k_nom = std::abs(transfer_factor(lambda, setup));
  if (!(k_nom > 0.0) || !std::isfinite(k_nom)) {
    throw DomainError("systematic_budget: degenerate configuration, K = 0");
  }
  if (k_out != nullptr) *k_out = k_nom;

  // Corrections are referenced to the coupling implied by the statistical
  // phase bound; see README (Systematic budget).
  const double z = normal_quantile_two_sided(cl);
  const double phi_ref = std::abs(est.phi_central) + z * est.sigma_stat;
  const double g_nom = phi_ref / k_nom;

  Budget budget;
  KahanSum total_central;
  KahanSum total_var;
  for (const BudgetParameter& param : params) {
    const double nominal = nominal_parameter_value(param.kind, setup);
    const double center = std::isnan(param.center) ? nominal : param.center;
    double dg[2];
    for (int side = 0; side < 2; ++side) {
      const double value = center + (side == 0 ? param.sigma : -param.sigma);
      const ExperimentSetup pset = perturbed_setup(param.kind, setup, value);
      const double k = std::abs(transfer_factor(lambda, pset));
      if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("systematic_budget: degenerate perturbation for " +
                          param.name);
      }
      dg[side] = phi_ref / k - g_nom;
    }
    SystematicEntry entry;
    entry.name = param.name;
    entry.nominal = center;
    entry.uncertainty = param.sigma;
    entry.correction_central = 0.5 * (dg[0] + dg[1]);
    entry.correction_sigma = 0.5 * std::abs(dg[0] - dg[1]);
    total_central.add(entry.correction_central);
    total_var.add(entry.correction_sigma * entry.correction_sigma);
    budget.rows.push_back(std::move(entry));
  }

  budget.total.name = "total";
  budget.total.correction_central = total_central.value();
  budget.total.correction_sigma = std::sqrt(total_var.value());
  return budget;
}

}  // namespace

PhaseEstimate fit_phase(std::span<const FitPoint> data) {
  if (data.size() < 3) throw DomainError("fit_phase: need at least 3 points");
  KahanSum s_ww, s_w2, s_xy;
  for (const FitPoint& p : data) {
    if (!std::isfinite(p.phi_mw) || !std::isfinite(p.intensity) ||
        !std::isfinite(p.sigma)) {
      throw DomainError("fit_phase: non-finite data point");
    }
    if (!(p.sigma > 0.0)) throw DomainError("fit_phase: sigma must be > 0");
    const double w = 1.0 / (p.sigma * p.sigma);
    const double s = std::sin(p.phi_mw);
    s_ww.add(w);
    s_w2.add(w * s * s);
    s_xy.add(w * s * p.intensity);
  }
  // identifiable only when some phi_mw is away from multiples of pi
  if (s_w2.value() <= s_ww.value() * 1e-24) {
    throw DomainError("fit_phase: unidentifiable, all phi_mw at multiples of pi");
  }
  // I = -sin(phi_mw) * s with s = sin(phi): linear weighted least squares in s
  const double s_hat = std::clamp(-s_xy.value() / s_w2.value(), -1.0, 1.0);
  const double phi = std::asin(s_hat);
  const double cos_phi = std::sqrt(std::max(1.0 - s_hat * s_hat, 1e-24));
  PhaseEstimate est;
  est.phi_central = phi;
  est.sigma_stat = 1.0 / (std::sqrt(s_w2.value()) * cos_phi);
  return est;
}

double transfer_factor(double lambda, const ExperimentSetup& setup) {
  CouplingHypothesis hyp{lambda, 1.0};
  return accumulated_phase(hyp, setup.geometry, setup.vibration, setup.theta,
                           setup.sequence, setup.constants, setup.phase)
      .phi;
}

std::vector<BudgetParameter> standard_budget_parameters() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {
      {BudgetParameterKind::Theta, "theta", 0.6 * M_PI / 180.0, nan},
      {BudgetParameterKind::MinDistance, "min_distance", 0.1e-6, nan},
      {BudgetParameterKind::Diameter, "diameter", 2.5e-6, nan},
      {BudgetParameterKind::Thickness, "thickness", 35.0e-6, nan},
      {BudgetParameterKind::Amplitude, "amplitude", 0.1e-9, nan},
      // nominal analysis assumes zero offset; the measured misalignment is
      // 1.3 +/- 0.8 um
      {BudgetParameterKind::LateralOffset, "xy_offset", 0.8e-6, 1.3e-6},
  };
}

Budget systematic_budget(double lambda, const ExperimentSetup& setup,
                         const PhaseEstimate& est, double cl,
                         std::span<const BudgetParameter> params) {
  return budget_with_transfer(lambda, setup, est, cl, params, nullptr);
}

double exclusion_limit(const PhaseEstimate& est, const SystematicEntry& total,
                       double k_transfer, double cl) {
  check_cl(cl);
  check_estimate(est);
  if (!(k_transfer > 0.0)) {
    throw DomainError("exclusion_limit: transfer factor must be > 0");
  }
  if (!std::isfinite(total.correction_central) ||
      !std::isfinite(total.correction_sigma) || total.correction_sigma < 0.0) {
    throw DomainError("exclusion_limit: invalid systematic total");
  }
  const double g_central =
      est.phi_central / k_transfer + total.correction_central;
  const double sigma_total =
      std::hypot(est.sigma_stat / k_transfer, total.correction_sigma);
  return std::abs(g_central) + normal_quantile_two_sided(cl) * sigma_total;
}

std::vector<ExclusionPoint> exclusion_curve(std::span<const double> lambdas,
                                            const PhaseEstimate& est,
                                            const ExperimentSetup& setup,
                                            double cl) {
  check_cl(cl);
  if (lambdas.empty()) throw DomainError("exclusion_curve: empty lambda grid");
  for (double lambda : lambdas) {
    if (!(lambda >= 0.1e-6) || !(lambda <= 10.0e-3)) {
      throw DomainError("exclusion_curve: lambda grid must lie in [0.1 um, 10 mm]");
    }
  }
  std::vector<ExclusionPoint> curve;
  curve.reserve(lambdas.size());
  for (double lambda : lambdas) {
    double k = 0.0;
    const Budget budget = budget_with_transfer(lambda, setup, est, cl, {}, &k);
    ExclusionPoint point;
    point.lambda = lambda;
    point.mass_ev = mass_from_lambda(lambda, setup.constants);
    point.g_limit = exclusion_limit(est, budget.total, std::abs(k), cl);
    curve.push_back(point);
  }
  return curve;
}

double mass_from_lambda(double lambda, const PhysicalConstants& pc) {
  if (!(lambda > 0.0)) throw DomainError("mass_from_lambda: lambda must be > 0");
  return pc.hbar_c_ev_m / lambda;
}

double lambda_from_mass(double mass_ev, const PhysicalConstants& pc) {
  if (!(mass_ev > 0.0)) throw DomainError("lambda_from_mass: mass must be > 0");
  return pc.hbar_c_ev_m / mass_ev;
}

double normal_quantile_two_sided(double cl) {
  check_cl(cl);
  const double p = 0.5 * (1.0 + cl);

  // Acklam's rational approximation of the inverse normal CDF ...
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  double x;
  if (p > 0.97575) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // ... followed by two Halley refinements against the exact erfc-based CDF.
  for (int i = 0; i < 2; ++i) {
    const double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace spinforce
