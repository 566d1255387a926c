// spinforce command-line front end. Talks to the library exclusively through
// the C API (spinforce.h); all output is CSV with a comment preamble that
// records the effective config hash.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinforce.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

int exit_code_for(sf_status status) {
  switch (status) {
    case SF_OK:
      return kExitOk;
    case SF_ERROR_CONVERGENCE:
      return kExitConvergence;
    case SF_ERROR_IO:
      return kExitIo;
    default:
      return kExitConfig;
  }
}

struct ContextDeleter {
  void operator()(sf_context* ctx) const { sf_context_destroy(ctx); }
};
using ContextPtr = std::unique_ptr<sf_context, ContextDeleter>;

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "spinforce: error: " << message << "\n";
  std::exit(code);
}

void check(sf_context* ctx, sf_status status) {
  if (status != SF_OK) {
    die(exit_code_for(status), sf_context_last_error(ctx));
  }
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class OutputWriter {
 public:
  OutputWriter(const std::string& path, sf_context* ctx,
               const std::string& command) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) die(kExitIo, "cannot open output file: " + path);
      out_ = &file_;
      path_ = path;
    }
    uint64_t hash = 0, seed = 0;
    sf_context_config_hash(ctx, &hash);
    sf_context_seed(ctx, &seed);
    char line[128];
    std::snprintf(line, sizeof line, "# spinforce %s\n# version: %s\n",
                  command.c_str(), sf_version());
    *out_ << line;
    std::snprintf(line, sizeof line,
                  "# config_hash: %016" PRIx64 "\n# seed: %" PRIu64 "\n", hash,
                  seed);
    *out_ << line;
  }

  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) *out_ << ',';
      *out_ << cells[i];
    }
    *out_ << '\n';
  }

  void finish() {
    out_->flush();
    if (!file_.is_open()) return;
    if (!file_) die(kExitIo, "error writing output file: " + path_);
    file_.close();
  }

 private:
  std::ofstream file_;
  std::ostream* out_ = &std::cout;
  std::string path_;
};

ContextPtr make_context(const std::string& config_path,
                        std::optional<uint64_t> seed) {
  sf_context* raw = nullptr;
  char err[1024] = {0};
  sf_status status;
  if (config_path.empty()) {
    status = sf_context_create(&raw, err, sizeof err);
  } else {
    status = sf_context_create_from_file(config_path.c_str(), &raw, err, sizeof err);
  }
  if (status != SF_OK) die(exit_code_for(status), err);
  ContextPtr ctx(raw);
  if (seed) sf_context_set_seed(ctx.get(), *seed);
  return ctx;
}

struct FitTable {
  std::vector<double> phi_mw, intensity, sigma;
};

FitTable read_fit_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(kExitIo, "cannot open data file: " + path);
  FitTable table;
  std::string line;
  int col_phi = -1, col_i = -1, col_sigma = -1;
  bool have_header = false;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
        if (cells[i] == "phi_mw_rad") col_phi = i;
        if (cells[i] == "I") col_i = i;
        if (cells[i] == "sigma_I") col_sigma = i;
      }
      if (col_phi < 0 || col_i < 0 || col_sigma < 0) {
        die(kExitConfig,
            "data file must have a header with columns phi_mw_rad, I, sigma_I");
      }
      have_header = true;
      continue;
    }
    const int needed = std::max(col_phi, std::max(col_i, col_sigma));
    if (static_cast<int>(cells.size()) <= needed) {
      die(kExitConfig, "short row at line " + std::to_string(line_no));
    }
    auto parse = [&](const std::string& text, const char* what) {
      try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
      } catch (const std::exception&) {
        die(kExitConfig, std::string("bad ") + what + " value at line " +
                             std::to_string(line_no) + ": " + text);
      }
    };
    table.phi_mw.push_back(parse(cells[col_phi], "phi_mw_rad"));
    table.intensity.push_back(parse(cells[col_i], "I"));
    table.sigma.push_back(parse(cells[col_sigma], "sigma_I"));
  }
  if (!have_header) die(kExitConfig, "empty data file: " + path);
  if (table.phi_mw.empty()) die(kExitConfig, "no data rows in: " + path);
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NV-center exotic spin- and velocity-dependent interaction toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<uint64_t> seed;
  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--seed", seed, "override the config RNG seed");

  double lambda_um = -1.0, d_um = -1.0;
  double g_override = std::nan("");
  std::string method = "analytic", variant = "config";
  std::string data_path;
  double lambda_min_um = 1.0, lambda_max_um = 330.0;
  int n_points = 40;

  CLI::App* cmd_field = app.add_subcommand(
      "field", "evaluate f by closed form and quadrature");
  cmd_field->add_option("--lambda-um", lambda_um, "force range [um]");
  cmd_field->add_option("--d-um", d_um, "sensor-source distance [um]");

  CLI::App* cmd_phase =
      app.add_subcommand("phase", "accumulated anomalous echo phase");
  cmd_phase->add_option("--lambda-um", lambda_um, "force range [um]");
  cmd_phase->add_option("--g", g_override, "coupling product");
  cmd_phase->add_option("--method", method, "analytic | timedomain")
      ->check(CLI::IsMember({"analytic", "timedomain"}));
  cmd_phase->add_option("--variant", variant, "config | plus | minus")
      ->check(CLI::IsMember({"config", "plus", "minus"}));

  CLI::App* cmd_fit =
      app.add_subcommand("fit", "fit phi from an interference data table");
  cmd_fit->add_option("--data", data_path, "CSV with phi_mw_rad, I, sigma_I")
      ->required();

  CLI::App* cmd_budget =
      app.add_subcommand("budget", "systematic error budget at one lambda");
  cmd_budget->add_option("--lambda-um", lambda_um, "force range [um]");

  CLI::App* cmd_curve =
      app.add_subcommand("curve", "exclusion limit vs force range");
  cmd_curve->add_option("--lambda-min-um", lambda_min_um, "grid start [um]");
  cmd_curve->add_option("--lambda-max-um", lambda_max_um, "grid end [um]");
  cmd_curve->add_option("--points", n_points, "number of log-spaced points")
      ->check(CLI::Range(2, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  ContextPtr ctx = make_context(config_path, seed);

  auto effective_lambda_m = [&]() {
    if (lambda_um > 0.0) return lambda_um * 1e-6;
    double v = 0.0;
    check(ctx.get(), sf_context_default_lambda(ctx.get(), &v));
    return v;
  };

  if (cmd_field->parsed()) {
    const double lambda_m = effective_lambda_m();
    double d_m = d_um > 0.0 ? d_um * 1e-6 : 0.0;
    if (d_um <= 0.0) check(ctx.get(), sf_context_default_distance(ctx.get(), &d_m));
    sf_field_result res{};
    check(ctx.get(), sf_field_eval(ctx.get(), lambda_m, d_m, &res));
    OutputWriter out(out_path, ctx.get(), "field");
    out.row({"lambda_m", "d_m", "f_closed_m_inv", "f_quad_m_inv",
             "quad_abs_err_m_inv", "rel_diff"});
    out.row({format_value(lambda_m), format_value(d_m),
             res.closed_form_available ? format_value(res.f_closed_form) : "",
             format_value(res.f_quadrature),
             format_value(res.quadrature_abs_error),
             res.closed_form_available ? format_value(res.rel_diff) : ""});
    out.finish();
    return kExitOk;
  }

  if (cmd_phase->parsed()) {
    const double lambda_m = effective_lambda_m();
    double g = g_override;
    if (std::isnan(g)) check(ctx.get(), sf_context_default_g(ctx.get(), &g));
    const sf_phase_method m =
        method == "timedomain" ? SF_PHASE_TIME_DOMAIN : SF_PHASE_ANALYTIC;
    const sf_sync_variant v = variant == "plus"    ? SF_SYNC_PLUS
                              : variant == "minus" ? SF_SYNC_MINUS
                                                   : SF_SYNC_CONFIG;
    double phi = 0.0;
    check(ctx.get(), sf_phase_eval(ctx.get(), g, lambda_m, m, v, &phi));
    OutputWriter out(out_path, ctx.get(), "phase");
    out.row({"method", "variant", "lambda_m", "g_product", "phi_rad"});
    out.row({method, variant, format_value(lambda_m), format_value(g),
             format_value(phi)});
    out.finish();
    return kExitOk;
  }

  if (cmd_fit->parsed()) {
    const FitTable table = read_fit_table(data_path);
    double phi = 0.0, sigma = 0.0;
    check(ctx.get(),
          sf_fit_phase(ctx.get(), table.phi_mw.data(), table.intensity.data(),
                       table.sigma.data(), table.phi_mw.size(), &phi, &sigma));
    OutputWriter out(out_path, ctx.get(), "fit");
    out.row({"phi_central_rad", "sigma_stat_rad", "n_points"});
    out.row({format_value(phi), format_value(sigma),
             std::to_string(table.phi_mw.size())});
    out.finish();
    return kExitOk;
  }

  if (cmd_budget->parsed()) {
    const double lambda_m = effective_lambda_m();
    sf_budget_row rows[8];
    size_t count = 0;
    check(ctx.get(), sf_budget_eval(ctx.get(), lambda_m, rows, 8, &count));
    OutputWriter out(out_path, ctx.get(), "budget");
    out.row({"name", "nominal", "uncertainty", "correction_central",
             "correction_sigma"});
    for (size_t i = 0; i < count; ++i) {
      const bool total = std::string(rows[i].name) == "total";
      out.row({rows[i].name, total ? "" : format_value(rows[i].nominal),
               total ? "" : format_value(rows[i].uncertainty),
               format_value(rows[i].correction_central),
               format_value(rows[i].correction_sigma)});
    }
    out.finish();
    return kExitOk;
  }

  if (cmd_curve->parsed()) {
    if (!(lambda_min_um > 0.0) || !(lambda_max_um > lambda_min_um)) {
      die(kExitConfig, "curve needs 0 < --lambda-min-um < --lambda-max-um");
    }
    std::vector<double> lambda_m(n_points), mass_ev(n_points), g_limit(n_points);
    check(ctx.get(),
          sf_exclusion_curve(ctx.get(), lambda_min_um * 1e-6,
                             lambda_max_um * 1e-6, n_points, lambda_m.data(),
                             mass_ev.data(), g_limit.data()));
    OutputWriter out(out_path, ctx.get(), "curve");
    out.row({"lambda_m", "m_b_eV", "g_limit"});
    for (int i = 0; i < n_points; ++i) {
      out.row({format_value(lambda_m[i]), format_value(mass_ev[i]),
               format_value(g_limit[i])});
    }
    out.finish();
    return kExitOk;
  }

  return kExitConfig;
}
