/* spinforce C API: exotic spin- and velocity-dependent interaction toolkit.
 *
 * All functions return sf_status; results go through out-parameters. A
 * context (opaque handle) holds one experiment configuration plus the last
 * error message. Contexts are not thread-safe; use one per thread.
 */
#ifndef SPINFORCE_H
#define SPINFORCE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SF_API __attribute__((visibility("default")))

typedef enum sf_status {
  SF_OK = 0,
  SF_ERROR_INVALID_ARGUMENT = 1,
  SF_ERROR_CONFIG = 2,
  SF_ERROR_CONVERGENCE = 3,
  SF_ERROR_IO = 4,
  SF_ERROR_BUFFER_TOO_SMALL = 5,
  SF_ERROR_INTERNAL = 6
} sf_status;

typedef struct sf_context sf_context;

SF_API const char* sf_version(void);

/* Context creation. On failure a message is written to err_buf (when
 * non-NULL) and *out_ctx is left NULL. */
SF_API sf_status sf_context_create(sf_context** out_ctx, char* err_buf,
                                   size_t err_buf_size);
SF_API sf_status sf_context_create_from_file(const char* path,
                                             sf_context** out_ctx,
                                             char* err_buf,
                                             size_t err_buf_size);
SF_API sf_status sf_context_create_from_json(const char* json_text,
                                             sf_context** out_ctx,
                                             char* err_buf,
                                             size_t err_buf_size);
SF_API void sf_context_destroy(sf_context* ctx);

/* Message for the most recent failing call on this context ("" if none). */
SF_API const char* sf_context_last_error(const sf_context* ctx);

/* Canonical JSON of the effective (defaults-merged) config. Writes at most
 * buf_size bytes including the terminator; *needed receives the full length
 * including the terminator. Returns SF_ERROR_BUFFER_TOO_SMALL when buf is
 * NULL or too small. */
SF_API sf_status sf_context_effective_config(const sf_context* ctx, char* buf,
                                             size_t buf_size, size_t* needed);
SF_API sf_status sf_context_config_hash(const sf_context* ctx,
                                        uint64_t* out_hash);
SF_API sf_status sf_context_set_seed(sf_context* ctx, uint64_t seed);
SF_API sf_status sf_context_seed(const sf_context* ctx, uint64_t* out_seed);

/* Config accessors used by front ends for argument defaults. */
SF_API sf_status sf_context_default_lambda(const sf_context* ctx,
                                           double* out_lambda_m);
SF_API sf_status sf_context_default_distance(const sf_context* ctx,
                                             double* out_d_m);
SF_API sf_status sf_context_default_g(const sf_context* ctx, double* out_g);

/* ---- effective-field evaluation ---- */

typedef struct sf_field_result {
  double f_quadrature;          /* 1/m */
  double quadrature_abs_error;  /* 1/m */
  double f_closed_form;         /* 1/m; NaN when unavailable */
  double rel_diff;              /* |quad-closed|/closed; NaN when unavailable */
  int closed_form_available;    /* closed form valid for this geometry */
} sf_field_result;

SF_API sf_status sf_field_eval(sf_context* ctx, double lambda_m, double d_m,
                               sf_field_result* out);

/* ---- phase computation ---- */

typedef enum sf_phase_method {
  SF_PHASE_ANALYTIC = 0,
  SF_PHASE_TIME_DOMAIN = 1
} sf_phase_method;

typedef enum sf_sync_variant {
  SF_SYNC_CONFIG = 0, /* use the configured variant */
  SF_SYNC_PLUS = 1,   /* sequence starts at minimal distance */
  SF_SYNC_MINUS = 2   /* sequence starts at maximal distance */
} sf_sync_variant;

SF_API sf_status sf_phase_eval(sf_context* ctx, double g_product,
                               double lambda_m, sf_phase_method method,
                               sf_sync_variant variant, double* out_phi_rad);

/* Accumulated phase per unit coupling, K(lambda). */
SF_API sf_status sf_transfer_factor(sf_context* ctx, double lambda_m,
                                    double* out_k);

/* ---- inference ---- */

/* Weighted fit of I = -sin(phi_mw) sin(phi). Arrays of length n. */
SF_API sf_status sf_fit_phase(sf_context* ctx, const double* phi_mw_rad,
                              const double* intensity, const double* sigma,
                              size_t n, double* out_phi_rad,
                              double* out_sigma_rad);

typedef struct sf_budget_row {
  char name[24];
  double nominal;            /* parameter value, SI */
  double uncertainty;        /* parameter 1-sigma, SI */
  double correction_central; /* correction to g */
  double correction_sigma;
} sf_budget_row;

/* Six parameter rows followed by the total row (7 entries). */
SF_API sf_status sf_budget_eval(sf_context* ctx, double lambda_m,
                                sf_budget_row* rows, size_t capacity,
                                size_t* out_count);

/* 95%-style upper bound on |g| at lambda using the configured measured
 * phase estimate and confidence level. */
SF_API sf_status sf_exclusion_limit(sf_context* ctx, double lambda_m,
                                    double* out_g_limit);

/* Log-spaced exclusion curve; each output array has n_points entries. */
SF_API sf_status sf_exclusion_curve(sf_context* ctx, double lambda_min_m,
                                    double lambda_max_m, size_t n_points,
                                    double* out_lambda_m, double* out_mass_ev,
                                    double* out_g_limit);

/* ---- unit conversions (context-free) ---- */

SF_API sf_status sf_mass_from_lambda(double lambda_m, double* out_mass_ev);
SF_API sf_status sf_lambda_from_mass(double mass_ev, double* out_lambda_m);

#ifdef __cplusplus
}
#endif

#endif /* SPINFORCE_H */
