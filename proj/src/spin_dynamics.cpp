#include "spinforce/spin_dynamics.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "spinforce/errors.hpp"

namespace spinforce {

namespace {

// Composite Simpson on [a, b] with n intervals (n >= 2, rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  if (n < 2) n = 2;
  if (n & 1) ++n;
  const double h = (b - a) / n;
  KahanSum sum;
  sum.add(f(a));
  sum.add(f(b));
  for (int i = 1; i < n; ++i) {
    sum.add((i & 1 ? 4.0 : 2.0) * f(a + i * h));
  }
  return sum.value() * h / 3.0;
}

// Simpson over a prefix of uniformly spaced samples, with a 3/8 tail when the
// interval count is odd.
double simpson_samples(const std::vector<double>& y, size_t first, size_t last,
                       double h) {
  const size_t n = last - first;  // interval count
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * h * (y[first] + y[first + 1]);
  size_t end = last;
  double tail = 0.0;
  if (n & 1) {
    // last three intervals by Simpson 3/8
    if (n >= 3) {
      end = last - 3;
      tail = 3.0 * h / 8.0 *
             (y[end] + 3.0 * y[end + 1] + 3.0 * y[end + 2] + y[end + 3]);
    } else {
      // n == 1 handled above; unreachable
      end = first;
    }
  }
  KahanSum sum;
  if (end > first) {
    sum.add(y[first]);
    sum.add(y[end]);
    for (size_t i = first + 1; i < end; ++i) {
      sum.add(((i - first) & 1 ? 4.0 : 2.0) * y[i]);
    }
  }
  return sum.value() * h / 3.0 + tail;
}

struct FreeWindows {
  double first_start, first_end;
  double second_start, second_end;
};

FreeWindows free_windows(const SequenceConfig& seq) {
  FreeWindows w{};
  if (seq.finite_pulses) {
    const double t0 = 0.5 * seq.pi_half_duration;
    w.first_start = t0;
    w.first_end = t0 + seq.tau;
    w.second_start = w.first_end + seq.pi_duration;
    w.second_end = w.second_start + seq.tau;
  } else {
    w.first_start = 0.0;
    w.first_end = seq.tau;
    w.second_start = seq.tau;
    w.second_end = 2.0 * seq.tau;
  }
  return w;
}

}  // namespace

void SequenceConfig::validate() const {
  if (!(tau > 0.0)) throw DomainError("sequence: tau must be > 0");
  if (pi_half_duration < 0.0 || pi_duration < 0.0 ||
      laser_init_duration < 0.0 || laser_readout_duration < 0.0) {
    throw DomainError("sequence: durations must be >= 0");
  }
  if (!std::isfinite(phi_mw)) throw DomainError("sequence: phi_mw must be finite");
}

double SequenceConfig::vibration_phase_at_start() const {
  return variant == SyncVariant::PlusSync ? M_PI : 0.0;
}

PhaseResult accumulated_phase(const CouplingHypothesis& hyp,
                              const SourceGeometry& geometry,
                              const VibrationModel& vibration, double theta,
                              const SequenceConfig& seq,
                              const PhysicalConstants& pc,
                              const PhaseOptions& opt) {
  hyp.validate();
  vibration.validate();
  seq.validate();
  pc.validate();
  if (opt.samples_per_tau < 2) {
    throw DomainError("accumulated_phase: samples_per_tau must be >= 2");
  }
  if (hyp.g_product == 0.0) return {0.0, PhaseMethod::Analytic};

  const DistanceProfile profile(hyp.lambda, geometry, vibration.d0,
                                vibration.d0 + 2.0 * vibration.amplitude,
                                opt.quad);
  const double shift = seq.vibration_phase_at_start() / vibration.omega;
  const double prefactor =
      hyp.g_product / (2.0 * M_PI * pc.gamma_e) * std::cos(theta);
  auto detuning = [&](double t_seq) {
    const double t = t_seq + shift;
    return pc.gamma_e *
           (prefactor * profile(vibration.distance_at(t)) *
            vibration.velocity_at(t));
  };

  const FreeWindows w = free_windows(seq);
  const double first =
      simpson(detuning, w.first_start, w.first_end, opt.samples_per_tau);
  const double second =
      simpson(detuning, w.second_start, w.second_end, opt.samples_per_tau);
  return {first - second, PhaseMethod::Analytic};
}

double echo_response(const FieldTrace& trace, const SequenceConfig& seq,
                     const PhysicalConstants& pc) {
  trace.validate();
  seq.validate();
  pc.validate();
  const size_t n = trace.times.size();
  const double t0 = trace.times.front();
  const double h = (trace.times.back() - t0) / (n - 1);
  const double scale = std::max(std::abs(trace.times.back()), seq.tau);
  if (std::abs(t0) > 1e-9 * scale) {
    throw DomainError("echo_response: trace must start at t = 0");
  }
  for (size_t i = 1; i < n; ++i) {
    if (std::abs(trace.times[i] - t0 - i * h) > 1e-9 * scale) {
      throw DomainError("echo_response: trace grid must be uniform");
    }
  }
  if (trace.times.back() < 2.0 * seq.tau - 1e-9 * scale) {
    throw DomainError("echo_response: trace must cover [0, 2*tau]");
  }
  const double k_tau = seq.tau / h;
  const size_t i_tau = static_cast<size_t>(std::llround(k_tau));
  if (i_tau == 0 || i_tau >= n - 1 ||
      std::abs(k_tau - static_cast<double>(i_tau)) > 1e-6) {
    throw DomainError("echo_response: tau must land on a trace sample");
  }
  const size_t i_2tau = std::min(2 * i_tau, n - 1);

  const double first = simpson_samples(trace.values, 0, i_tau, h);
  const double second = simpson_samples(trace.values, i_tau, i_2tau, h);
  return pc.gamma_e * (first - second);
}

Populations populations(double phi, double phi_mw) {
  if (!std::isfinite(phi) || !std::isfinite(phi_mw)) {
    throw DomainError("populations: phases must be finite");
  }
  Populations p;
  p.p_plus = 0.5 * (1.0 + std::cos(phi_mw + phi));
  p.p_minus = 0.5 * (1.0 + std::cos(phi_mw - phi));
  return p;
}

PhaseResult time_domain_phase(const CouplingHypothesis& hyp,
                              const SourceGeometry& geometry,
                              const VibrationModel& vibration, double theta,
                              const SequenceConfig& seq,
                              const PhysicalConstants& pc, int n_steps,
                              const QuadratureOptions& opt) {
  hyp.validate();
  vibration.validate();
  seq.validate();
  pc.validate();
  if (n_steps < 1000) {
    throw DomainError("time_domain_phase: n_steps must be >= 1000");
  }

  const DistanceProfile profile(hyp.lambda, geometry, vibration.d0,
                                vibration.d0 + 2.0 * vibration.amplitude, opt);
  const double shift = seq.vibration_phase_at_start() / vibration.omega;
  const double prefactor =
      hyp.g_product / (2.0 * M_PI * pc.gamma_e) * std::cos(theta);
  auto detuning = [&](double t_seq) {
    const double t = t_seq + shift;
    return pc.gamma_e *
           (prefactor * profile(vibration.distance_at(t)) *
            vibration.velocity_at(t));
  };

  using cplx = std::complex<double>;
  const cplx mi(0.0, -1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  // |0> after the laser pulse.
  cplx c0(1.0, 0.0), c1(0.0, 0.0);

  // pi/2 about x.
  {
    const cplx a = inv_sqrt2 * (c0 + mi * c1);
    const cplx b = inv_sqrt2 * (mi * c0 + c1);
    c0 = a;
    c1 = b;
  }

  // Free evolution: the detuning is diagonal, so the propagator is the exact
  // phase exp(i * Int delta dt) on |1>; each step integrates the window with
  // a three-point Simpson rule (4th order).
  auto evolve = [&](double a, double b, int steps) {
    const double h = (b - a) / steps;
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double t = a + i * h;
      acc += h / 6.0 *
             (detuning(t) + 4.0 * detuning(t + 0.5 * h) + detuning(t + h));
    }
    c1 *= std::exp(cplx(0.0, acc));
  };

  const FreeWindows w = free_windows(seq);
  const int per_window = std::max(1, n_steps / 2);
  evolve(w.first_start, w.first_end, per_window);

  // pi about x.
  {
    const cplx a = mi * c1;
    const cplx b = mi * c0;
    c0 = a;
    c1 = b;
  }

  evolve(w.second_start, w.second_end, per_window);

  // Final pi/2 with microwave phase m: amplitude on |0> is
  // (c0 - i e^{-i m} c1)/sqrt(2), giving P0(m) = [1 + cos(m + phi)]/2.
  auto population0 = [&](double m) {
    const cplx amp = inv_sqrt2 * (c0 + mi * std::exp(cplx(0.0, -m)) * c1);
    return std::norm(amp);
  };
  const double cos_phi = 2.0 * population0(0.0) - 1.0;
  const double sin_phi = 2.0 * population0(-0.5 * M_PI) - 1.0;
  return {std::atan2(sin_phi, cos_phi), PhaseMethod::TimeDomain};
}

ReadoutSample simulate_readout(double i_true, std::uint64_t shots,
                               double contrast, std::uint64_t seed) {
  if (!(contrast > 0.0) || contrast > 1.0) {
    throw DomainError("simulate_readout: contrast must lie in (0, 1]");
  }
  if (shots < 1) throw DomainError("simulate_readout: shots must be >= 1");
  if (!(std::abs(i_true) <= 1.0)) {
    throw DomainError("simulate_readout: |I| must be <= 1");
  }

  const std::uint64_t n_plus = shots - shots / 2;
  const std::uint64_t n_minus = shots / 2;
  const double q_plus = 0.5 * (1.0 + contrast * i_true);
  const double q_minus = 0.5 * (1.0 - contrast * i_true);

  std::mt19937_64 rng(seed);
  auto draw = [&rng](std::uint64_t n, double q) {
    std::binomial_distribution<std::uint64_t> dist(n, q);
    return dist(rng);
  };
  const double est_plus =
      static_cast<double>(draw(n_plus, q_plus)) / static_cast<double>(n_plus);
  // A single shot degenerates to the plus sequence only.
  const double est_minus =
      n_minus > 0 ? static_cast<double>(draw(n_minus, q_minus)) /
                        static_cast<double>(n_minus)
                  : q_minus;

  auto var_term = [](double est, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double nn = static_cast<double>(n);
    // floor the estimated Bernoulli variance so empty samples keep a finite
    // error bar
    return std::max(est * (1.0 - est), 0.25 / nn) / nn;
  };

  ReadoutSample out;
  out.intensity = (est_plus - est_minus) / contrast;
  out.std_error =
      std::sqrt(var_term(est_plus, n_plus) + var_term(est_minus, n_minus)) /
      contrast;
  return out;
}

}  // namespace spinforce
