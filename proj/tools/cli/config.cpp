#include "cli/config.hpp"

#include "srsp/errors.hpp"
#include "srsp/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srsp::cli {

namespace {

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(what + " must be finite");
  return x;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

long long integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<long long>();
}

int int_or(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const long long x = integer(obj.at(key), where + "." + key);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(where + "." + key + " out of range");
  }
  return static_cast<int>(x);
}

bool bool_or(const json& obj, const char* key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
  return obj.at(key).get<bool>();
}

std::uint64_t seed_value(const json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  throw ConfigError(what + " must be a nonnegative integer");
}

const json& object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where + " must be an object");
  return v;
}

}  // namespace

json load_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ParseError(path.string() + ": top level must be an object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  object(obj, where);
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

Grid parse_grid(const json& obj) {
  require_keys(obj, "grid", {"n", "L"});
  const long long n = integer(member(obj, "n", "grid"), "grid.n");
  if (n < 8 || n > 1024) throw ConfigError("grid.n must lie in [8, 1024]");
  return make_grid(static_cast<int>(n), number(member(obj, "L", "grid"), "grid.L"));
}

Params parse_params(const json& obj, bool need_rho) {
  require_keys(obj, "params", {"alpha", "beta", "p", "rho"});
  Params p;
  p.alpha = number(member(obj, "alpha", "params"), "params.alpha");
  p.beta = number(member(obj, "beta", "params"), "params.beta");
  p.p = number(member(obj, "p", "params"), "params.p");
  if (need_rho) {
    p.rho = number(member(obj, "rho", "params"), "params.rho");
    p.validate();
  } else {
    p.rho = number_or(obj, "rho", 1.0, "params");
    p.validate_couplings();
  }
  return p;
}

KineticVariant parse_variant_field(const json& parent, const char* key) {
  if (!parent.contains(key)) return KineticVariant::inhomogeneous;
  if (!parent.at(key).is_string()) throw ConfigError(std::string(key) + " must be a string");
  return parse_variant(parent.at(key).get<std::string>());
}

MinimizeConfig parse_minimize(const json& obj, const std::filesystem::path& base_dir) {
  const std::string w = "minimize";
  require_keys(obj, w,
               {"max_iters", "grad_tol", "initial_step", "backtrack_factor", "armijo_c", "init",
                "recenter_every", "preconditioned", "energy_floor", "unbounded_margin", "variant"});
  MinimizeConfig c;
  c.max_iters = int_or(obj, "max_iters", c.max_iters, w);
  c.grad_tol = number_or(obj, "grad_tol", c.grad_tol, w);
  c.initial_step = number_or(obj, "initial_step", c.initial_step, w);
  c.backtrack_factor = number_or(obj, "backtrack_factor", c.backtrack_factor, w);
  c.armijo_c = number_or(obj, "armijo_c", c.armijo_c, w);
  c.recenter_every = int_or(obj, "recenter_every", c.recenter_every, w);
  c.preconditioned = bool_or(obj, "preconditioned", c.preconditioned, w);
  c.energy_floor = number_or(obj, "energy_floor", c.energy_floor, w);
  c.unbounded_margin = number_or(obj, "unbounded_margin", c.unbounded_margin, w);
  c.variant = parse_variant_field(obj);
  if (obj.contains("init")) {
    const json& init = obj.at("init");
    require_keys(init, "minimize.init", {"kind", "width", "path", "seed"});
    const std::string kind = init.value("kind", std::string("gaussian"));
    if (kind == "gaussian") {
      c.init.kind = InitKind::gaussian;
    } else if (kind == "from_file") {
      c.init.kind = InitKind::from_file;
    } else if (kind == "random") {
      c.init.kind = InitKind::random;
    } else {
      throw ConfigError("minimize.init.kind must be gaussian, from_file or random");
    }
    c.init.width = number_or(init, "width", 0.0, "minimize.init");
    if (c.init.width < 0.0) throw ConfigError("minimize.init.width must be nonnegative");
    if (init.contains("path")) {
      if (!init.at("path").is_string()) throw ConfigError("minimize.init.path must be a string");
      c.init.path = resolve(base_dir, init.at("path").get<std::string>()).string();
    }
    if (init.contains("seed")) c.init.seed = seed_value(init.at("seed"), "minimize.init.seed");
  }
  if (c.recenter_every < 0) throw ConfigError("minimize.recenter_every must be nonnegative");
  if (!(c.unbounded_margin >= 0.0)) throw ConfigError("minimize.unbounded_margin must be nonnegative");
  c.validate();
  return c;
}

AscentConfig parse_ascent(const json& obj) {
  const std::string w = "ascent";
  require_keys(obj, w, {"steps", "step_size", "seed", "init_width", "init_noise"});
  AscentConfig c;
  c.steps = int_or(obj, "steps", c.steps, w);
  c.step_size = number_or(obj, "step_size", c.step_size, w);
  if (obj.contains("seed")) c.seed = seed_value(obj.at("seed"), "ascent.seed");
  c.init_width = number_or(obj, "init_width", c.init_width, w);
  c.init_noise = number_or(obj, "init_noise", c.init_noise, w);
  c.validate();
  return c;
}

ResampleMethod parse_method(const json& parent) {
  if (!parent.contains("method")) return ResampleMethod::spectral;
  const json& m = parent.at("method");
  if (m == "spectral") return ResampleMethod::spectral;
  if (m == "trilinear") return ResampleMethod::trilinear;
  throw ConfigError("method must be spectral or trilinear");
}

std::vector<double> parse_number_list(const json& parent, const char* key, const std::string& where) {
  const json& list = member(parent, key, where);
  if (!list.is_array()) throw ConfigError(where + "." + key + " must be an array");
  std::vector<double> out;
  for (const json& v : list) out.push_back(number(v, where + "." + key + " entry"));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const json& parent, const char* key) {
  std::vector<std::uint64_t> out;
  if (!parent.contains(key)) return out;
  const json& list = parent.at(key);
  if (!list.is_array()) throw ConfigError(std::string(key) + " must be an array");
  for (const json& v : list) out.push_back(seed_value(v, std::string(key) + " entry"));
  return out;
}

Tolerances parse_tolerances(const json& parent) {
  Tolerances t;
  if (!parent.contains("tolerances")) return t;
  const json& obj = parent.at("tolerances");
  require_keys(obj, "tolerances", {"virial", "pohozaev", "el"});
  t.virial = number_or(obj, "virial", t.virial, "tolerances");
  t.pohozaev = number_or(obj, "pohozaev", t.pohozaev, "tolerances");
  t.el = number_or(obj, "el", t.el, "tolerances");
  if (!(t.virial > 0.0 && t.pohozaev > 0.0 && t.el > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  return t;
}

json to_json(const EnergyBreakdown& b) {
  return {
      {"variant", to_string(b.variant)},
      {"kinetic", b.kinetic},
      {"hartree", b.hartree},
      {"potential", b.potential},
      {"total", b.total},
      {"d_value", b.d_value},
      {"norms",
       {{"l2_sq", b.norms.l2_sq},
        {"lp_p", b.norms.lp_p},
        {"h_half_sq", b.norms.h_half_sq},
        {"hdot_half_sq", b.norms.hdot_half_sq},
        {"h_minus_half_sq", b.norms.h_minus_half_sq}}},
  };
}

json to_json(const IdentityReport& r) {
  return {
      {"omega", r.omega},
      {"virial", {{"residual", r.virial_residual}, {"scale", r.virial_scale}, {"relative", r.virial_relative()}}},
      {"pohozaev",
       {{"residual", r.pohozaev_residual}, {"scale", r.pohozaev_scale}, {"relative", r.pohozaev_relative()}}},
      {"el_residual_rel", r.el_residual_rel},
      {"f_prime_at_1", r.f_prime_at_1},
      {"g_prime_at_1", r.g_prime_at_1},
      {"derivatives",
       {{"f_prime", r.derivatives.f_prime},
        {"f_prime_fd", r.derivatives.f_prime_fd},
        {"f_agreement", r.derivatives.f_agreement},
        {"g_prime", r.derivatives.g_prime},
        {"g_prime_fd", r.derivatives.g_prime_fd},
        {"g_agreement", r.derivatives.g_agreement}}},
  };
}

json to_json(const MinimizeConfig& c) {
  const char* kind = c.init.kind == InitKind::gaussian ? "gaussian"
                     : c.init.kind == InitKind::random ? "random"
                                                       : "from_file";
  json init = {{"kind", kind}, {"width", c.init.width}, {"seed", c.init.seed}};
  if (c.init.kind == InitKind::from_file) init["path"] = c.init.path;
  return {
      {"max_iters", c.max_iters},
      {"grad_tol", c.grad_tol},
      {"initial_step", c.initial_step},
      {"backtrack_factor", c.backtrack_factor},
      {"armijo_c", c.armijo_c},
      {"init", init},
      {"recenter_every", c.recenter_every},
      {"preconditioned", c.preconditioned},
      {"energy_floor", c.energy_floor},
      {"unbounded_margin", c.unbounded_margin},
      {"variant", to_string(c.variant)},
  };
}

json grid_json(const Grid& g) {
  return {{"n", g.n()}, {"L", g.box_length()}, {"spacing", g.spacing()}};
}

}  // namespace srsp::cli
