#include "spinforce.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "spinforce/config.hpp"
#include "spinforce/errors.hpp"

using namespace spinforce;

struct sf_context {
  ExperimentConfig config;
  std::string last_error;
};

namespace {

void copy_message(const std::string& message, char* buf, size_t size) {
  if (buf == nullptr || size == 0) return;
  const size_t n = std::min(message.size(), size - 1);
  std::memcpy(buf, message.data(), n);
  buf[n] = '\0';
}

sf_status status_for_exception(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return SF_ERROR_CONFIG;
  if (dynamic_cast<const ConvergenceError*>(&e)) return SF_ERROR_CONVERGENCE;
  if (dynamic_cast<const IoError*>(&e)) return SF_ERROR_IO;
  if (dynamic_cast<const DomainError*>(&e)) return SF_ERROR_INVALID_ARGUMENT;
  return SF_ERROR_INTERNAL;
}

// Runs `body` against the context, translating exceptions into status codes
// and recording the message on the context.
template <typename Fn>
sf_status guarded(sf_context* ctx, Fn&& body) {
  if (ctx == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  try {
    ctx->last_error.clear();
    return body();
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return status_for_exception(e);
  } catch (...) {
    ctx->last_error = "unknown error";
    return SF_ERROR_INTERNAL;
  }
}

template <typename Fn>
sf_status create_guarded(sf_context** out_ctx, char* err_buf,
                         size_t err_buf_size, Fn&& make_config) {
  if (out_ctx == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  *out_ctx = nullptr;
  try {
    auto* ctx = new sf_context{make_config(), {}};
    *out_ctx = ctx;
    return SF_OK;
  } catch (const std::exception& e) {
    copy_message(e.what(), err_buf, err_buf_size);
    return status_for_exception(e);
  } catch (...) {
    copy_message("unknown error", err_buf, err_buf_size);
    return SF_ERROR_INTERNAL;
  }
}

SequenceConfig sequence_for(const sf_context* ctx, sf_sync_variant variant) {
  SequenceConfig seq = ctx->config.setup().sequence;
  if (variant == SF_SYNC_PLUS) seq.variant = SyncVariant::PlusSync;
  if (variant == SF_SYNC_MINUS) seq.variant = SyncVariant::MinusSync;
  return seq;
}

}  // namespace

extern "C" {

const char* sf_version(void) { return "0.1.0"; }

sf_status sf_context_create(sf_context** out_ctx, char* err_buf,
                            size_t err_buf_size) {
  return create_guarded(out_ctx, err_buf, err_buf_size,
                        [] { return ExperimentConfig::defaults(); });
}

sf_status sf_context_create_from_file(const char* path, sf_context** out_ctx,
                                      char* err_buf, size_t err_buf_size) {
  if (path == nullptr) {
    copy_message("path is NULL", err_buf, err_buf_size);
    return SF_ERROR_INVALID_ARGUMENT;
  }
  return create_guarded(out_ctx, err_buf, err_buf_size,
                        [path] { return ExperimentConfig::from_file(path); });
}

sf_status sf_context_create_from_json(const char* json_text,
                                      sf_context** out_ctx, char* err_buf,
                                      size_t err_buf_size) {
  if (json_text == nullptr) {
    copy_message("json_text is NULL", err_buf, err_buf_size);
    return SF_ERROR_INVALID_ARGUMENT;
  }
  return create_guarded(out_ctx, err_buf, err_buf_size, [json_text] {
    return ExperimentConfig::from_json_text(json_text);
  });
}

void sf_context_destroy(sf_context* ctx) { delete ctx; }

const char* sf_context_last_error(const sf_context* ctx) {
  return ctx == nullptr ? "" : ctx->last_error.c_str();
}

sf_status sf_context_effective_config(const sf_context* ctx, char* buf,
                                      size_t buf_size, size_t* needed) {
  if (ctx == nullptr || needed == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  const std::string text = ctx->config.to_json();
  *needed = text.size() + 1;
  if (buf == nullptr || buf_size < *needed) return SF_ERROR_BUFFER_TOO_SMALL;
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  return SF_OK;
}

sf_status sf_context_config_hash(const sf_context* ctx, uint64_t* out_hash) {
  if (ctx == nullptr || out_hash == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  *out_hash = ctx->config.hash();
  return SF_OK;
}

sf_status sf_context_set_seed(sf_context* ctx, uint64_t seed) {
  if (ctx == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  ctx->config.seed = seed;
  return SF_OK;
}

sf_status sf_context_seed(const sf_context* ctx, uint64_t* out_seed) {
  if (ctx == nullptr || out_seed == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  *out_seed = ctx->config.seed;
  return SF_OK;
}

sf_status sf_context_default_lambda(const sf_context* ctx,
                                    double* out_lambda_m) {
  if (ctx == nullptr || out_lambda_m == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  *out_lambda_m = ctx->config.lambda_um.front() * 1e-6;
  return SF_OK;
}

sf_status sf_context_default_distance(const sf_context* ctx, double* out_d_m) {
  if (ctx == nullptr || out_d_m == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  *out_d_m = ctx->config.d0_um * 1e-6;
  return SF_OK;
}

sf_status sf_context_default_g(const sf_context* ctx, double* out_g) {
  if (ctx == nullptr || out_g == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  *out_g = ctx->config.g_product;
  return SF_OK;
}

sf_status sf_field_eval(sf_context* ctx, double lambda_m, double d_m,
                        sf_field_result* out) {
  return guarded(ctx, [&]() -> sf_status {
    if (out == nullptr) throw DomainError("output pointer is NULL");
    const ExperimentSetup setup = ctx->config.setup();
    const QuadratureResult quad =
        f_quadrature(lambda_m, setup.geometry, d_m, setup.phase.quad);
    out->f_quadrature = quad.value;
    out->quadrature_abs_error = quad.abs_error;
    if (setup.geometry.closed_form_valid()) {
      out->closed_form_available = 1;
      out->f_closed_form = f_closed_form(lambda_m, setup.geometry, d_m);
      out->rel_diff = std::abs(quad.value - out->f_closed_form) /
                      std::abs(out->f_closed_form);
    } else {
      out->closed_form_available = 0;
      out->f_closed_form = std::numeric_limits<double>::quiet_NaN();
      out->rel_diff = std::numeric_limits<double>::quiet_NaN();
    }
    return SF_OK;
  });
}

sf_status sf_phase_eval(sf_context* ctx, double g_product, double lambda_m,
                        sf_phase_method method, sf_sync_variant variant,
                        double* out_phi_rad) {
  return guarded(ctx, [&]() -> sf_status {
    if (out_phi_rad == nullptr) throw DomainError("output pointer is NULL");
    const ExperimentSetup setup = ctx->config.setup();
    const SequenceConfig seq = sequence_for(ctx, variant);
    const CouplingHypothesis hyp{lambda_m, g_product};
    if (method == SF_PHASE_TIME_DOMAIN) {
      *out_phi_rad = time_domain_phase(hyp, setup.geometry, setup.vibration,
                                       setup.theta, seq, setup.constants,
                                       ctx->config.time_domain_steps,
                                       setup.phase.quad)
                         .phi;
    } else {
      *out_phi_rad = accumulated_phase(hyp, setup.geometry, setup.vibration,
                                       setup.theta, seq, setup.constants,
                                       setup.phase)
                         .phi;
    }
    return SF_OK;
  });
}

sf_status sf_transfer_factor(sf_context* ctx, double lambda_m, double* out_k) {
  return guarded(ctx, [&]() -> sf_status {
    if (out_k == nullptr) throw DomainError("output pointer is NULL");
    *out_k = transfer_factor(lambda_m, ctx->config.setup());
    return SF_OK;
  });
}

sf_status sf_fit_phase(sf_context* ctx, const double* phi_mw_rad,
                       const double* intensity, const double* sigma, size_t n,
                       double* out_phi_rad, double* out_sigma_rad) {
  return guarded(ctx, [&]() -> sf_status {
    if (phi_mw_rad == nullptr || intensity == nullptr || sigma == nullptr ||
        out_phi_rad == nullptr || out_sigma_rad == nullptr) {
      throw DomainError("array or output pointer is NULL");
    }
    std::vector<FitPoint> data(n);
    for (size_t i = 0; i < n; ++i) {
      data[i] = {phi_mw_rad[i], intensity[i], sigma[i]};
    }
    const PhaseEstimate est = fit_phase(data);
    *out_phi_rad = est.phi_central;
    *out_sigma_rad = est.sigma_stat;
    return SF_OK;
  });
}

sf_status sf_budget_eval(sf_context* ctx, double lambda_m, sf_budget_row* rows,
                         size_t capacity, size_t* out_count) {
  return guarded(ctx, [&]() -> sf_status {
    if (out_count == nullptr) throw DomainError("out_count is NULL");
    const ExperimentSetup setup = ctx->config.setup();
    const Budget budget = systematic_budget(lambda_m, setup,
                                            ctx->config.measured(),
                                            ctx->config.cl);
    *out_count = budget.rows.size() + 1;
    if (rows == nullptr || capacity < *out_count) {
      ctx->last_error = "row buffer too small";
      return SF_ERROR_BUFFER_TOO_SMALL;
    }
    auto fill = [](sf_budget_row& dst, const SystematicEntry& src) {
      std::snprintf(dst.name, sizeof dst.name, "%s", src.name.c_str());
      dst.nominal = src.nominal;
      dst.uncertainty = src.uncertainty;
      dst.correction_central = src.correction_central;
      dst.correction_sigma = src.correction_sigma;
    };
    for (size_t i = 0; i < budget.rows.size(); ++i) fill(rows[i], budget.rows[i]);
    fill(rows[budget.rows.size()], budget.total);
    return SF_OK;
  });
}

sf_status sf_exclusion_limit(sf_context* ctx, double lambda_m,
                             double* out_g_limit) {
  return guarded(ctx, [&]() -> sf_status {
    if (out_g_limit == nullptr) throw DomainError("output pointer is NULL");
    const ExperimentSetup setup = ctx->config.setup();
    const std::vector<double> grid = {lambda_m};
    const auto curve =
        exclusion_curve(grid, ctx->config.measured(), setup, ctx->config.cl);
    *out_g_limit = curve.front().g_limit;
    return SF_OK;
  });
}

sf_status sf_exclusion_curve(sf_context* ctx, double lambda_min_m,
                             double lambda_max_m, size_t n_points,
                             double* out_lambda_m, double* out_mass_ev,
                             double* out_g_limit) {
  return guarded(ctx, [&]() -> sf_status {
    if (out_lambda_m == nullptr || out_mass_ev == nullptr ||
        out_g_limit == nullptr) {
      throw DomainError("output pointer is NULL");
    }
    if (n_points < 2) throw DomainError("curve needs at least 2 points");
    if (!(lambda_min_m > 0.0) || !(lambda_max_m > lambda_min_m)) {
      throw DomainError("curve needs 0 < lambda_min < lambda_max");
    }
    std::vector<double> grid(n_points);
    const double log_min = std::log(lambda_min_m);
    const double step = (std::log(lambda_max_m) - log_min) / (n_points - 1);
    for (size_t i = 0; i < n_points; ++i) {
      grid[i] = std::exp(log_min + static_cast<double>(i) * step);
    }
    grid.front() = lambda_min_m;
    grid.back() = lambda_max_m;
    const auto curve = exclusion_curve(grid, ctx->config.measured(),
                                       ctx->config.setup(), ctx->config.cl);
    for (size_t i = 0; i < n_points; ++i) {
      out_lambda_m[i] = curve[i].lambda;
      out_mass_ev[i] = curve[i].mass_ev;
      out_g_limit[i] = curve[i].g_limit;
    }
    return SF_OK;
  });
}

sf_status sf_mass_from_lambda(double lambda_m, double* out_mass_ev) {
  if (out_mass_ev == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  try {
    *out_mass_ev = mass_from_lambda(lambda_m);
    return SF_OK;
  } catch (const std::exception&) {
    return SF_ERROR_INVALID_ARGUMENT;
  }
}

sf_status sf_lambda_from_mass(double mass_ev, double* out_lambda_m) {
  if (out_lambda_m == nullptr) return SF_ERROR_INVALID_ARGUMENT;
  try {
    *out_lambda_m = lambda_from_mass(mass_ev);
    return SF_OK;
  } catch (const std::exception&) {
    return SF_ERROR_INVALID_ARGUMENT;
  }
}

}  // extern "C"
