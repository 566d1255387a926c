#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spinforce/spin_dynamics.hpp"

namespace spinforce {

struct PhaseEstimate {
  double phi_central = 0.0;  // rad
  double sigma_stat = 0.0;   // rad, > 0
};

struct FitPoint {
  double phi_mw = 0.0;     // rad
  double intensity = 0.0;  // I = P+ - P-
  double sigma = 0.0;      // 1-sigma uncertainty on intensity, > 0
};

// One systematic-budget row: a parameter (value, uncertainty, SI units) and
// the induced correction to the coupling product.
struct SystematicEntry {
  std::string name;
  double nominal = 0.0;
  double uncertainty = 0.0;
  double correction_central = 0.0;
  double correction_sigma = 0.0;
};

struct ExclusionPoint {
  double lambda = 0.0;    // m
  double mass_ev = 0.0;   // boson mass [eV]
  double g_limit = 0.0;   // upper bound on |g_A^e g_V^N|
};

// Nominal experiment description used by the inference routines.
struct ExperimentSetup {
  SourceGeometry geometry;
  VibrationModel vibration;
  double theta = 0.0;  // angle between v and the NV axis [rad]
  SequenceConfig sequence;
  PhysicalConstants constants;
  PhaseOptions phase;
};

// Weighted least-squares fit of I = -sin(phi_mw) * sin(phi) in the single
// parameter phi. Requires >= 3 points, positive sigmas, and at least one
// phi_mw away from multiples of pi (identifiability).
PhaseEstimate fit_phase(std::span<const FitPoint> data);

// Accumulated phase per unit coupling, K(lambda) = phi(g = 1).
double transfer_factor(double lambda, const ExperimentSetup& setup);

// The parameters propagated through the systematic budget.
enum class BudgetParameterKind {
  Theta,          // angle between v and the NV axis
  MinDistance,    // d0
  Diameter,       // 2R (thickness held fixed)
  Thickness,      // clip height t
  Amplitude,      // vibration amplitude A
  LateralOffset,  // |sensor offset| in the x-y plane
};

struct BudgetParameter {
  BudgetParameterKind kind;
  std::string name;
  double sigma = 0.0;  // 1-sigma spread, SI units of the parameter
  // Center of the p +/- sigma excursion. NaN means "use the setup's nominal
  // value"; the lateral-offset row sets this to the measured offset while the
  // nominal analysis assumes zero.
  double center = std::numeric_limits<double>::quiet_NaN();
};

// The six measured parameters and uncertainties of the experiment.
std::vector<BudgetParameter> standard_budget_parameters();

struct Budget {
  std::vector<SystematicEntry> rows;
  SystematicEntry total;  // centrals added, sigmas in quadrature
};

// Systematic error budget at force range lambda. For each parameter the
// coupling implied by the measured phase bound, g(p) = phi_ref / K(lambda; p)
// with phi_ref = |phi_central| + z(cl)*sigma_stat, is recomputed at
// p_center +/- sigma; correction_central = [dg(p+) + dg(p-)]/2 and
// correction_sigma = |dg(p+) - dg(p-)|/2 with dg(p') = g(p') - g(nominal).
Budget systematic_budget(
    double lambda, const ExperimentSetup& setup, const PhaseEstimate& est,
    double cl, std::span<const BudgetParameter> params = {});

// g_limit = |phi_central/K + correction_central|
//           + z(cl) * sqrt((sigma_stat/K)^2 + correction_sigma^2).
double exclusion_limit(const PhaseEstimate& est, const SystematicEntry& total,
                       double k_transfer, double cl);

// Per-lambda recomputation of K, budget and limit.
std::vector<ExclusionPoint> exclusion_curve(std::span<const double> lambdas,
                                            const PhaseEstimate& est,
                                            const ExperimentSetup& setup,
                                            double cl);

// Boson mass [eV] for force range lambda [m], m c^2 = hbar c / lambda, and
// the inverse.
double mass_from_lambda(double lambda,
                        const PhysicalConstants& pc = PhysicalConstants::codata2018());
double lambda_from_mass(double mass_ev,
                        const PhysicalConstants& pc = PhysicalConstants::codata2018());

// Two-sided normal quantile: z(cl) = Phi^-1((1+cl)/2); z(0.95) = 1.95996.
double normal_quantile_two_sided(double cl);

}  // namespace spinforce
