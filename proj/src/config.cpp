#include "spinforce/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spinforce/errors.hpp"

namespace spinforce {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path, message);
}

double get_number(const json& block, const std::string& path,
                  const std::string& key, double fallback) {
  if (!block.contains(key)) return fallback;
  const json& v = block.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& block, const std::string& path,
              const std::string& key, bool fallback) {
  if (!block.contains(key)) return fallback;
  const json& v = block.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& block, const std::string& path,
                       const std::string& key, const std::string& fallback) {
  if (!block.contains(key)) return fallback;
  const json& v = block.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_list(const json& block, const std::string& path,
                                    const std::string& key) {
  const json& v = block.at(key);
  if (!v.is_array() || v.empty()) fail(path + "." + key, "expected a non-empty array");
  std::vector<double> out;
  for (const json& item : v) {
    if (!item.is_number()) fail(path + "." + key, "expected numeric entries");
    out.push_back(item.get<double>());
  }
  return out;
}

void reject_unknown_keys(const json& block, const std::string& path,
                         const std::set<std::string>& known) {
  for (auto it = block.begin(); it != block.end(); ++it) {
    if (!known.contains(it.key())) {
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
  }
}

const json& get_block(const json& root, const std::string& name,
                      const json& empty) {
  if (!root.contains(name)) return empty;
  const json& block = root.at(name);
  if (!block.is_object()) fail(name, "expected an object");
  return block;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("", "config root must be an object");
  reject_unknown_keys(root, "",
                      {"geometry", "vibration", "sensor", "hypothesis",
                       "analysis", "budget"});

  ExperimentConfig cfg = defaults();
  const json empty = json::object();

  {
    const json& g = get_block(root, "geometry", empty);
    reject_unknown_keys(g, "geometry",
                        {"radius_um", "thickness_um", "rho_per_m3",
                         "offset_x_um", "offset_y_um"});
    cfg.radius_um = get_number(g, "geometry", "radius_um", cfg.radius_um);
    cfg.thickness_um = get_number(g, "geometry", "thickness_um", cfg.thickness_um);
    cfg.rho_per_m3 = get_number(g, "geometry", "rho_per_m3", cfg.rho_per_m3);
    cfg.offset_x_um = get_number(g, "geometry", "offset_x_um", cfg.offset_x_um);
    cfg.offset_y_um = get_number(g, "geometry", "offset_y_um", cfg.offset_y_um);
  }
  {
    const json& v = get_block(root, "vibration", empty);
    reject_unknown_keys(v, "vibration",
                        {"d0_um", "amplitude_nm", "frequency_khz",
                         "omega_rad_s"});
    cfg.d0_um = get_number(v, "vibration", "d0_um", cfg.d0_um);
    cfg.amplitude_nm = get_number(v, "vibration", "amplitude_nm", cfg.amplitude_nm);
    if (v.contains("frequency_khz") && v.contains("omega_rad_s")) {
      fail("vibration.omega_rad_s", "specify either frequency_khz or omega_rad_s");
    }
    if (v.contains("omega_rad_s")) {
      const double omega = get_number(v, "vibration", "omega_rad_s", 0.0);
      if (!(omega > 0.0)) fail("vibration.omega_rad_s", "must be > 0");
      cfg.frequency_khz = omega / (2.0 * M_PI) * 1e-3;
    } else {
      cfg.frequency_khz = get_number(v, "vibration", "frequency_khz", cfg.frequency_khz);
    }
  }
  {
    const json& s = get_block(root, "sensor", empty);
    reject_unknown_keys(s, "sensor",
                        {"theta_deg", "tau_us", "pi_half_ns", "pi_ns",
                         "laser_init_us", "laser_readout_us", "contrast",
                         "shots", "variant", "finite_pulses"});
    cfg.theta_deg = get_number(s, "sensor", "theta_deg", cfg.theta_deg);
    cfg.tau_us = get_number(s, "sensor", "tau_us", cfg.tau_us);
    cfg.pi_half_ns = get_number(s, "sensor", "pi_half_ns", cfg.pi_half_ns);
    cfg.pi_ns = get_number(s, "sensor", "pi_ns", cfg.pi_ns);
    cfg.laser_init_us = get_number(s, "sensor", "laser_init_us", cfg.laser_init_us);
    cfg.laser_readout_us =
        get_number(s, "sensor", "laser_readout_us", cfg.laser_readout_us);
    cfg.contrast = get_number(s, "sensor", "contrast", cfg.contrast);
    cfg.shots = get_number(s, "sensor", "shots", cfg.shots);
    cfg.variant = get_string(s, "sensor", "variant", cfg.variant);
    cfg.finite_pulses = get_bool(s, "sensor", "finite_pulses", cfg.finite_pulses);
  }
  {
    const json& h = get_block(root, "hypothesis", empty);
    reject_unknown_keys(h, "hypothesis", {"lambda_um", "mass_ev", "g_product"});
    if (h.contains("lambda_um") && h.contains("mass_ev")) {
      fail("hypothesis.mass_ev", "specify either lambda_um or mass_ev");
    }
    if (h.contains("lambda_um")) {
      cfg.lambda_um = get_number_list(h, "hypothesis", "lambda_um");
    } else if (h.contains("mass_ev")) {
      cfg.lambda_um.clear();
      for (double m : get_number_list(h, "hypothesis", "mass_ev")) {
        if (!(m > 0.0)) fail("hypothesis.mass_ev", "masses must be > 0");
        cfg.lambda_um.push_back(lambda_from_mass(m) * 1e6);
      }
    }
    cfg.g_product = get_number(h, "hypothesis", "g_product", cfg.g_product);
  }
  {
    const json& a = get_block(root, "analysis", empty);
    reject_unknown_keys(a, "analysis",
                        {"cl", "quad_rel_tol", "samples_per_tau",
                         "time_domain_steps", "seed", "phi_central_rad",
                         "sigma_stat_rad"});
    cfg.cl = get_number(a, "analysis", "cl", cfg.cl);
    cfg.quad_rel_tol = get_number(a, "analysis", "quad_rel_tol", cfg.quad_rel_tol);
    cfg.samples_per_tau = static_cast<int>(
        get_number(a, "analysis", "samples_per_tau", cfg.samples_per_tau));
    cfg.time_domain_steps = static_cast<int>(
        get_number(a, "analysis", "time_domain_steps", cfg.time_domain_steps));
    if (a.contains("seed")) {
      const json& v = a.at("seed");
      if (!v.is_number_unsigned()) fail("analysis.seed", "expected an unsigned integer");
      cfg.seed = v.get<std::uint64_t>();
    }
    cfg.phi_central_rad =
        get_number(a, "analysis", "phi_central_rad", cfg.phi_central_rad);
    cfg.sigma_stat_rad =
        get_number(a, "analysis", "sigma_stat_rad", cfg.sigma_stat_rad);
  }
  {
    const json& b = get_block(root, "budget", empty);
    reject_unknown_keys(b, "budget",
                        {"sigma_theta_deg", "sigma_d0_um", "sigma_diameter_um",
                         "sigma_thickness_um", "sigma_amplitude_nm",
                         "xy_center_um", "xy_sigma_um"});
    cfg.sigma_theta_deg = get_number(b, "budget", "sigma_theta_deg", cfg.sigma_theta_deg);
    cfg.sigma_d0_um = get_number(b, "budget", "sigma_d0_um", cfg.sigma_d0_um);
    cfg.sigma_diameter_um =
        get_number(b, "budget", "sigma_diameter_um", cfg.sigma_diameter_um);
    cfg.sigma_thickness_um =
        get_number(b, "budget", "sigma_thickness_um", cfg.sigma_thickness_um);
    cfg.sigma_amplitude_nm =
        get_number(b, "budget", "sigma_amplitude_nm", cfg.sigma_amplitude_nm);
    cfg.xy_center_um = get_number(b, "budget", "xy_center_um", cfg.xy_center_um);
    cfg.xy_sigma_um = get_number(b, "budget", "xy_sigma_um", cfg.xy_sigma_um);
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading config file: " + path);
  return from_json_text(buf.str());
}

std::string ExperimentConfig::to_json() const {
  json root;
  root["geometry"] = {{"radius_um", radius_um},
                      {"thickness_um", thickness_um},
                      {"rho_per_m3", rho_per_m3},
                      {"offset_x_um", offset_x_um},
                      {"offset_y_um", offset_y_um}};
  root["vibration"] = {{"d0_um", d0_um},
                       {"amplitude_nm", amplitude_nm},
                       {"frequency_khz", frequency_khz}};
  root["sensor"] = {{"theta_deg", theta_deg},
                    {"tau_us", tau_us},
                    {"pi_half_ns", pi_half_ns},
                    {"pi_ns", pi_ns},
                    {"laser_init_us", laser_init_us},
                    {"laser_readout_us", laser_readout_us},
                    {"contrast", contrast},
                    {"shots", shots},
                    {"variant", variant},
                    {"finite_pulses", finite_pulses}};
  root["hypothesis"] = {{"lambda_um", lambda_um}, {"g_product", g_product}};
  root["analysis"] = {{"cl", cl},
                      {"quad_rel_tol", quad_rel_tol},
                      {"samples_per_tau", samples_per_tau},
                      {"time_domain_steps", time_domain_steps},
                      {"seed", seed},
                      {"phi_central_rad", phi_central_rad},
                      {"sigma_stat_rad", sigma_stat_rad}};
  root["budget"] = {{"sigma_theta_deg", sigma_theta_deg},
                    {"sigma_d0_um", sigma_d0_um},
                    {"sigma_diameter_um", sigma_diameter_um},
                    {"sigma_thickness_um", sigma_thickness_um},
                    {"sigma_amplitude_nm", sigma_amplitude_nm},
                    {"xy_center_um", xy_center_um},
                    {"xy_sigma_um", xy_sigma_um}};
  return root.dump(2);
}

std::uint64_t ExperimentConfig::hash() const {
  // FNV-1a over the canonical rendering
  const std::string text = to_json();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be > 0");
  };
  positive(radius_um, "geometry.radius_um");
  positive(thickness_um, "geometry.thickness_um");
  if (thickness_um > 2.0 * radius_um) {
    fail("geometry.thickness_um", "must be <= 2*radius_um");
  }
  if (!(rho_per_m3 >= 0.0)) fail("geometry.rho_per_m3", "must be >= 0");
  if (!std::isfinite(offset_x_um) || !std::isfinite(offset_y_um)) {
    fail("geometry.offset_x_um", "must be finite");
  }
  positive(d0_um, "vibration.d0_um");
  if (!(amplitude_nm >= 0.0)) fail("vibration.amplitude_nm", "must be >= 0");
  positive(frequency_khz, "vibration.frequency_khz");
  if (!std::isfinite(theta_deg)) fail("sensor.theta_deg", "must be finite");
  positive(tau_us, "sensor.tau_us");
  if (pi_half_ns < 0.0 || pi_ns < 0.0 || laser_init_us < 0.0 ||
      laser_readout_us < 0.0) {
    fail("sensor.pi_half_ns", "pulse durations must be >= 0");
  }
  if (!(contrast > 0.0) || contrast > 1.0) fail("sensor.contrast", "must lie in (0, 1]");
  if (!(shots >= 1.0)) fail("sensor.shots", "must be >= 1");
  if (variant != "plus" && variant != "minus") {
    fail("sensor.variant", "must be \"plus\" or \"minus\"");
  }
  if (lambda_um.empty()) fail("hypothesis.lambda_um", "must be non-empty");
  for (double l : lambda_um) {
    if (!(l > 0.0) || !std::isfinite(l)) fail("hypothesis.lambda_um", "entries must be > 0");
  }
  if (!std::isfinite(g_product)) fail("hypothesis.g_product", "must be finite");
  if (!(cl > 0.5) || !(cl < 1.0)) fail("analysis.cl", "must lie in (0.5, 1)");
  if (!(quad_rel_tol > 0.0) || quad_rel_tol > 1e-2) {
    fail("analysis.quad_rel_tol", "must lie in (0, 1e-2]");
  }
  if (samples_per_tau < 2) fail("analysis.samples_per_tau", "must be >= 2");
  if (time_domain_steps < 1000) fail("analysis.time_domain_steps", "must be >= 1000");
  if (!std::isfinite(phi_central_rad)) fail("analysis.phi_central_rad", "must be finite");
  if (!(sigma_stat_rad >= 0.0)) fail("analysis.sigma_stat_rad", "must be >= 0");
  auto nonneg = [](double v, const char* key) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(key, "must be >= 0");
  };
  nonneg(sigma_theta_deg, "budget.sigma_theta_deg");
  nonneg(sigma_d0_um, "budget.sigma_d0_um");
  nonneg(sigma_diameter_um, "budget.sigma_diameter_um");
  nonneg(sigma_thickness_um, "budget.sigma_thickness_um");
  nonneg(sigma_amplitude_nm, "budget.sigma_amplitude_nm");
  nonneg(xy_center_um, "budget.xy_center_um");
  nonneg(xy_sigma_um, "budget.xy_sigma_um");
}

ExperimentSetup ExperimentConfig::setup() const {
  validate();
  ExperimentSetup s;
  s.geometry.radius = radius_um * 1e-6;
  s.geometry.thickness = thickness_um * 1e-6;
  s.geometry.number_density = rho_per_m3;
  s.geometry.offset_x = offset_x_um * 1e-6;
  s.geometry.offset_y = offset_y_um * 1e-6;
  s.vibration.d0 = d0_um * 1e-6;
  s.vibration.amplitude = amplitude_nm * 1e-9;
  s.vibration.omega = 2.0 * M_PI * frequency_khz * 1e3;
  s.theta = theta_deg * M_PI / 180.0;
  s.sequence.tau = tau_us * 1e-6;
  s.sequence.variant =
      variant == "plus" ? SyncVariant::PlusSync : SyncVariant::MinusSync;
  s.sequence.pi_half_duration = pi_half_ns * 1e-9;
  s.sequence.pi_duration = pi_ns * 1e-9;
  s.sequence.laser_init_duration = laser_init_us * 1e-6;
  s.sequence.laser_readout_duration = laser_readout_us * 1e-6;
  s.sequence.finite_pulses = finite_pulses;
  s.constants = PhysicalConstants::codata2018();
  s.phase.samples_per_tau = samples_per_tau;
  s.phase.quad.rel_tol = quad_rel_tol;
  return s;
}

std::vector<double> ExperimentConfig::lambdas_m() const {
  std::vector<double> out;
  out.reserve(lambda_um.size());
  for (double l : lambda_um) out.push_back(l * 1e-6);
  return out;
}

PhaseEstimate ExperimentConfig::measured() const {
  return {phi_central_rad, sigma_stat_rad};
}

}  // namespace spinforce
