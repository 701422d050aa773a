#include "cli/commands.hpp"

#include "srsp/errors.hpp"
#include "srsp/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace srsp::cli {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const json& section(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw ConfigError(std::string("config: missing '") + key + "'");
  return cfg.at(key);
}

json optional_section(const json& cfg, const char* key) {
  return cfg.contains(key) ? cfg.at(key) : json::object();
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  out << "iteration,energy,grad_norm,step\n";
  for (const TraceEntry& t : trace) {
    out << t.iteration << ',' << g17(t.energy) << ',' << g17(t.grad_norm) << ',' << g17(t.step) << '\n';
  }
  return out.str();
}

json init_json(const InitSpec& s) {
  switch (s.kind) {
    case InitKind::gaussian:
      return {{"kind", "gaussian"}, {"width", s.width}};
    case InitKind::random:
      return {{"kind", "random"}, {"seed", s.seed}};
    case InitKind::from_file:
      return {{"kind", "from_file"}, {"path", s.path}};
  }
  return nullptr;
}

// The configured start, then one random start per extra seed. With a random
// configured init every seed is its own start.
std::vector<InitSpec> build_starts(const InitSpec& base, const std::vector<std::uint64_t>& seeds) {
  std::vector<InitSpec> starts;
  if (base.kind != InitKind::random || seeds.empty()) starts.push_back(base);
  for (const std::uint64_t seed : seeds) {
    InitSpec s = base;
    s.kind = InitKind::random;
    s.seed = seed;
    starts.push_back(s);
  }
  return starts;
}

struct StartOutcome {
  std::optional<GroundStateResult> result;
  std::optional<std::string> unbounded;
  double unbounded_energy = 0.0;
  int unbounded_iteration = 0;
};

template <class Run>
StartOutcome run_start(Run&& run) {
  StartOutcome o;
  try {
    o.result = run();
  } catch (const UnboundedDetected& e) {
    o.unbounded = e.what();
    o.unbounded_energy = e.energy();
    o.unbounded_iteration = e.iteration();
  }
  return o;
}

json start_summary(const StartOutcome& o, json init) {
  json s = {{"init", std::move(init)}};
  if (o.unbounded) {
    s["status"] = "unbounded";
    s["energy"] = o.unbounded_energy;
    s["iteration"] = o.unbounded_iteration;
  } else {
    s["status"] = o.result->converged ? "converged" : "not_converged";
    s["energy"] = o.result->energy.total;
    s["iterations"] = o.result->iterations;
  }
  return s;
}

// Lowest energy among the bounded outcomes; -1 if none.
int best_index(const std::vector<StartOutcome>& outcomes) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(outcomes.size()); ++i) {
    if (!outcomes[i].result) continue;
    if (best < 0 || outcomes[i].result->energy.total < outcomes[best].result->energy.total) best = i;
  }
  return best;
}

int first_unbounded(const std::vector<StartOutcome>& outcomes) {
  for (int i = 0; i < static_cast<int>(outcomes.size()); ++i) {
    if (outcomes[i].unbounded) return i;
  }
  return -1;
}

json result_json(const GroundStateResult& r, const Params& p) {
  return {
      {"status", r.converged ? "converged" : "not_converged"},
      {"converged", r.converged},
      {"stagnated", r.stagnated},
      {"iterations", r.iterations},
      {"params", {{"alpha", p.alpha}, {"beta", p.beta}, {"p", p.p}, {"rho", p.rho}}},
      {"energy", to_json(r.energy)},
      {"energy_per_mass", r.energy.total / p.rho},
      {"omega", r.omega},
      {"imaginary_fraction", r.imaginary_fraction},
      {"boundary_mass_fraction", boundary_mass_fraction(r.field)},
      {"final_grad_norm", r.trace.empty() ? 0.0 : r.trace.back().grad_norm},
  };
}

// ---------------------------------------------------------------- energy

int cmd_energy(RunContext& ctx, std::ostream& out) {
  const json& cfg = ctx.config();
  require_keys(cfg, "config", {"snapshot", "params", "variant"});
  const Params params = parse_params(section(cfg, "params"), false);
  const KineticVariant variant = parse_variant_field(cfg);
  if (!section(cfg, "snapshot").is_string()) throw ConfigError("snapshot must be a path string");
  const Field u = read_snapshot(resolve(ctx.config_dir(), cfg.at("snapshot").get<std::string>()));

  ctx.start(grid_json(u.grid()));
  const EnergyBreakdown b = energy(u, params, variant);
  const json doc = {{"grid", grid_json(u.grid())}, {"breakdown", to_json(b)}};
  ctx.write_json("energy.json", doc);
  out << doc.dump(2) << '\n';
  return exit_code::success;
}

// ---------------------------------------------------------------- minimize

int cmd_minimize(RunContext& ctx, std::ostream& out) {
  const json& cfg = ctx.config();
  require_keys(cfg, "config", {"grid", "params", "minimize", "seeds"});
  const Grid grid = parse_grid(section(cfg, "grid"));
  const Params params = parse_params(section(cfg, "params"), true);
  const MinimizeConfig mc = parse_minimize(optional_section(cfg, "minimize"), ctx.config_dir());
  std::vector<std::uint64_t> seeds = parse_seed_list(cfg);
  if (ctx.options().seed) seeds = {*ctx.options().seed};
  const std::vector<InitSpec> starts = build_starts(mc.init, seeds);

  ctx.start(grid_json(grid));
  std::vector<StartOutcome> outcomes(starts.size());
  parallel_for(static_cast<int>(starts.size()), ctx.options().workers, [&](int i) {
    MinimizeConfig c = mc;
    c.init = starts[static_cast<std::size_t>(i)];
    outcomes[static_cast<std::size_t>(i)] = run_start([&] { return minimize(grid, params, c); });
  });

  json summaries = json::array();
  for (std::size_t i = 0; i < starts.size(); ++i) summaries.push_back(start_summary(outcomes[i], init_json(starts[i])));

  if (const int u = first_unbounded(outcomes); u >= 0) {
    const StartOutcome& o = outcomes[static_cast<std::size_t>(u)];
    ctx.write_json("result.json", {{"status", "unbounded"},
                                   {"message", *o.unbounded},
                                   {"energy", o.unbounded_energy},
                                   {"iteration", o.unbounded_iteration},
                                   {"start", u},
                                   {"starts", summaries}});
    out << "unbounded below: " << *o.unbounded << '\n';
    return exit_code::unbounded;
  }

  const int best = best_index(outcomes);
  const GroundStateResult& r = *outcomes[static_cast<std::size_t>(best)].result;
  write_snapshot(ctx.path("field.spsf"), r.field);
  ctx.write_text("trace.csv", trace_csv(r.trace));
  ctx.write_text("slice_x.csv", axis_slice_csv(r.field, 0));
  ctx.write_json("identities.json", to_json(r.residuals));
  json doc = result_json(r, params);
  doc["best_start"] = best;
  doc["starts"] = summaries;
  doc["minimize"] = to_json(mc);
  ctx.write_json("result.json", doc);

  out << (r.converged ? "converged" : "not converged") << " after " << r.iterations
      << " iterations: E = " << g17(r.energy.total) << ", omega = " << g17(r.omega)
      << ", EL residual = " << r.residuals.el_residual_rel << '\n';
  return exit_code::success;
}

// ---------------------------------------------------------------- curve

struct CurvePoint {
  double rho = 0.0;
  std::string status = "not_run";
  std::optional<GroundStateResult> result;
  json starts = json::array();
};

json verdict(bool available, bool value) { return available ? json(value) : json("unavailable"); }

int cmd_curve(RunContext& ctx, std::ostream& out) {
  const json& cfg = ctx.config();
  require_keys(cfg, "config", {"grid", "params", "rhos", "minimize", "seeds", "warm_start"});
  const Grid grid = parse_grid(section(cfg, "grid"));
  const Params base = parse_params(section(cfg, "params"), false);
  const std::vector<double> rhos = parse_number_list(cfg, "rhos", "config");
  if (rhos.size() < 2) throw ConfigError("curve: rhos needs at least two values");
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    Params q = base;
    q.rho = rhos[i];
    q.validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (rhos[j] == rhos[i]) throw ConfigError("curve: duplicate rho " + g17(rhos[i]));
    }
  }
  const MinimizeConfig mc = parse_minimize(optional_section(cfg, "minimize"), ctx.config_dir());
  std::vector<std::uint64_t> seeds = parse_seed_list(cfg);
  if (ctx.options().seed) seeds = {*ctx.options().seed};
  bool warm = true;
  if (cfg.contains("warm_start")) {
    if (!cfg.at("warm_start").is_boolean()) throw ConfigError("warm_start must be a boolean");
    warm = cfg.at("warm_start").get<bool>();
  }

  ctx.start(grid_json(grid));
  const int workers = ctx.options().workers;
  std::vector<CurvePoint> points(rhos.size());

  // Starts for one point: the warm start (if any), the configured init, and random seeds.
  // I(rho) is the best energy over all of them.
  auto solve_point = [&](std::size_t k, const Field* previous, int inner_workers) {
    CurvePoint& pt = points[k];
    pt.rho = rhos[k];
    Params q = base;
    q.rho = pt.rho;
    std::vector<InitSpec> starts = build_starts(mc.init, seeds);
    const bool use_warm = previous != nullptr;
    const int count = static_cast<int>(starts.size()) + (use_warm ? 1 : 0);
    std::vector<StartOutcome> outcomes(static_cast<std::size_t>(count));
    parallel_for(count, inner_workers, [&](int i) {
      if (use_warm && i == 0) {
        outcomes[0] = run_start([&] { return minimize_from(project_mass(*previous, q.rho), q, mc); });
        return;
      }
      MinimizeConfig c = mc;
      c.init = starts[static_cast<std::size_t>(i - (use_warm ? 1 : 0))];
      outcomes[static_cast<std::size_t>(i)] = run_start([&] { return minimize(grid, q, c); });
    });
    for (int i = 0; i < count; ++i) {
      json init = (use_warm && i == 0) ? json{{"kind", "warm"}}
                                       : init_json(starts[static_cast<std::size_t>(i - (use_warm ? 1 : 0))]);
      pt.starts.push_back(start_summary(outcomes[static_cast<std::size_t>(i)], std::move(init)));
    }
    if (first_unbounded(outcomes) >= 0) {
      pt.status = "unbounded";
      return;
    }
    pt.result = std::move(outcomes[static_cast<std::size_t>(best_index(outcomes))].result);
    pt.status = pt.result->converged ? "converged" : "not_converged";
  };

  if (warm) {
    const Field* previous = nullptr;
    for (std::size_t k = 0; k < points.size(); ++k) {
      solve_point(k, previous, workers);
      if (points[k].result) previous = &points[k].result->field;
    }
  } else {
    parallel_for(static_cast<int>(points.size()), workers,
                 [&](int k) { solve_point(static_cast<std::size_t>(k), nullptr, 1); });
  }

  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a].rho < points[b].rho; });

  std::ostringstream csv;
  csv << "rho,i_rho,ratio,converged,iterations,omega,el_residual_rel,pohozaev_rel,virial_rel,h_half_over_sqrt_rho,status\n";
  json rows = json::array();
  bool available = true;
  bool any_unbounded = false;
  std::vector<double> ratios;
  std::vector<double> norm_ratios;
  for (const std::size_t k : order) {
    const CurvePoint& pt = points[k];
    if (pt.result) {
      write_snapshot(ctx.path("fields/rho_" + g17(pt.rho) + ".spsf"), pt.result->field);
    }
    if (!pt.result || !pt.result->converged) available = false;
    if (pt.status == "unbounded") any_unbounded = true;
    json row = {{"rho", pt.rho}, {"status", pt.status}, {"starts", pt.starts}};
    if (!pt.result) {
      csv << g17(pt.rho) << ",,,false,,,,,," << ',' << pt.status << '\n';
      rows.push_back(row);
      continue;
    }
    const GroundStateResult& r = *pt.result;
    const double ratio = r.energy.total / pt.rho;
    const double norm_ratio = std::sqrt(r.energy.norms.h_half_sq / pt.rho);
    ratios.push_back(ratio);
    norm_ratios.push_back(norm_ratio);
    csv << g17(pt.rho) << ',' << g17(r.energy.total) << ',' << g17(ratio) << ','
        << (r.converged ? "true" : "false") << ',' << r.iterations << ',' << g17(r.omega) << ','
        << g17(r.residuals.el_residual_rel) << ',' << g17(r.residuals.pohozaev_relative()) << ','
        << g17(r.residuals.virial_relative()) << ',' << g17(norm_ratio) << ',' << pt.status << '\n';
    row["i_rho"] = r.energy.total;
    row["ratio"] = ratio;
    row["iterations"] = r.iterations;
    row["omega"] = r.omega;
    row["h_half_over_sqrt_rho"] = norm_ratio;
    row["identities"] = to_json(r.residuals);
    rows.push_back(row);
  }
  ctx.write_text("curve.csv", csv.str());

  bool below_half = true;
  bool rising_as_rho_falls = true;
  bool nonincreasing = true;
  bool nondecreasing = true;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    below_half = below_half && ratios[i] < 0.5;
    if (i == 0) continue;
    rising_as_rho_falls = rising_as_rho_falls && ratios[i] < ratios[i - 1];
    nonincreasing = nonincreasing && ratios[i] <= ratios[i - 1];
    nondecreasing = nondecreasing && ratios[i] >= ratios[i - 1];
  }
  double norm_spread = 0.0;
  if (!norm_ratios.empty()) {
    norm_spread = *std::max_element(norm_ratios.begin(), norm_ratios.end()) /
                  *std::min_element(norm_ratios.begin(), norm_ratios.end());
  }
  const json verdicts = {
      {"all_ratios_below_half", verdict(available, below_half)},
      {"ratios_increase_as_rho_decreases", verdict(available, rising_as_rho_falls)},
      {"ratios_monotone_in_rho", verdict(available, nonincreasing || nondecreasing)},
      {"h_half_over_sqrt_rho_spread", available ? json(norm_spread) : json("unavailable")},
  };
  ctx.write_json("curve.json", {{"warm_start", warm}, {"points", rows}, {"verdicts", verdicts}});

  out << "curve over " << points.size() << " masses: " << verdicts.dump() << '\n';
  return any_unbounded ? exit_code::unbounded : exit_code::success;
}

// ---------------------------------------------------------------- best-constant

int cmd_best_constant(RunContext& ctx, std::ostream& out) {
  const json& cfg = ctx.config();
  require_keys(cfg, "config", {"grid", "ascent", "seeds", "pairs"});
  const Grid grid = parse_grid(section(cfg, "grid"));
  const AscentConfig ac = parse_ascent(optional_section(cfg, "ascent"));
  std::vector<std::uint64_t> seeds = parse_seed_list(cfg);
  if (ctx.options().seed) seeds = {*ctx.options().seed};
  if (seeds.empty()) seeds = {ac.seed};

  std::vector<std::pair<double, double>> pairs;
  if (cfg.contains("pairs")) {
    if (!cfg.at("pairs").is_array()) throw ConfigError("pairs must be an array of [alpha, beta]");
    for (const json& p : cfg.at("pairs")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigError("pairs entries must be [alpha, beta]");
      }
      const double a = p[0].get<double>();
      const double b = p[1].get<double>();
      if (!(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b))) {
        throw ConfigError("pairs: alpha and beta must be positive");
      }
      pairs.emplace_back(a, b);
    }
  }

  ctx.start(grid_json(grid));
  std::vector<std::optional<BestConstantEstimate>> runs(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), ctx.options().workers, [&](int i) {
    AscentConfig c = ac;
    c.seed = seeds[static_cast<std::size_t>(i)];
    runs[static_cast<std::size_t>(i)] = estimate_best_constant(grid, c);
  });
  std::size_t best = 0;
  json per_seed = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    per_seed.push_back({{"seed", seeds[i]}, {"s_lower", runs[i]->s_lower}});
    if (runs[i]->s_lower > runs[best]->s_lower) best = i;
  }
  const BestConstantEstimate& e = *runs[best];

  std::ostringstream trace;
  trace << "iteration,quotient,rms_radius\n";
  for (const AscentPoint& a : e.ascent_trace) {
    trace << a.iteration << ',' << g17(a.quotient) << ',' << g17(a.rms_radius) << '\n';
  }
  ctx.write_text("ascent.csv", trace.str());
  write_snapshot(ctx.path("maximizer.spsf"), e.maximizer);

  json doc = {{"s_lower", e.s_lower}, {"best_seed", seeds[best]}, {"runs", per_seed}, {"parts", nullptr}};
  const QuotientParts parts = weinstein_parts(e.maximizer);
  doc["parts"] = {{"l83_norm", parts.l83_norm}, {"hdot_half_sq", parts.hdot_half_sq}, {"d_value", parts.d_value}};
  if (!pairs.empty()) {
    std::ostringstream csv;
    csv << "alpha,beta,lhs,rhs_lower,verdict\n";
    json verdicts = json::array();
    for (const auto& [a, b] : pairs) {
      const ThresholdVerdict v = classify_boundedness(a, b, e.s_lower);
      csv << g17(v.alpha) << ',' << g17(v.beta) << ',' << g17(v.lhs) << ',' << g17(v.rhs_lower) << ','
          << to_string(v.verdict) << '\n';
      verdicts.push_back({{"alpha", v.alpha}, {"beta", v.beta}, {"lhs", v.lhs},
                          {"rhs_lower", v.rhs_lower}, {"verdict", to_string(v.verdict)}});
    }
    ctx.write_text("verdicts.csv", csv.str());
    doc["verdicts"] = verdicts;
  }
  ctx.write_json("estimate.json", doc);
  out << "s_lower = " << g17(e.s_lower) << " (seed " << seeds[best] << ")\n";
  return exit_code::success;
}

// ---------------------------------------------------------------- scaling

struct Profile {
  Field field;
  ScalingFamily exact;
};

Profile parse_profile(const json& obj, const Grid& grid, bool want_exact, const std::filesystem::path& dir) {
  require_keys(obj, "profile", {"kind", "width", "mass", "path"});
  const std::string kind = obj.value("kind", std::string("gaussian"));
  std::optional<double> target;
  if (obj.contains("mass")) {
    if (!obj.at("mass").is_number() || !(obj.at("mass").get<double>() > 0.0)) {
      throw ConfigError("profile.mass must be positive");
    }
    target = obj.at("mass").get<double>();
  }
  if (kind == "gaussian") {
    if (!obj.contains("width") || !obj.at("width").is_number()) throw ConfigError("profile.width is required");
    const double width = obj.at("width").get<double>();
    if (!(width > 0.0)) throw ConfigError("profile.width must be positive");
    if (!target) throw ConfigError("profile.mass is required for a gaussian profile");
    const double m = *target;
    auto make = [grid, width, m](double theta) { return project_mass(gaussian(grid, width / theta), m); };
    Profile p{make(1.0), {}};
    if (want_exact) p.exact = make;
    return p;
  }
  if (kind == "snapshot") {
    if (want_exact) throw ConfigError("exact scaling is only available for gaussian profiles");
    if (!obj.contains("path") || !obj.at("path").is_string()) throw ConfigError("profile.path is required");
    Field u = read_snapshot(resolve(dir, obj.at("path").get<std::string>()));
    if (u.grid() != grid) throw ConfigError("profile snapshot grid differs from the configured grid");
    if (target) u = project_mass(u, *target);
    return {std::move(u), {}};
  }
  throw ConfigError("profile.kind must be gaussian or snapshot");
}

int cmd_scaling(RunContext& ctx, std::ostream& out) {
  const json& cfg = ctx.config();
  require_keys(cfg, "config", {"grid", "params", "method", "blowup", "blowdown"});
  const Grid grid = parse_grid(section(cfg, "grid"));
  const Params params = parse_params(section(cfg, "params"), false);
  if (!params.is_critical()) throw ConfigError("scaling: params.p must be 8/3");
  const ResampleMethod method = parse_method(cfg);
  if (!cfg.contains("blowup") && !cfg.contains("blowdown")) {
    throw ConfigError("scaling: select at least one of blowup, blowdown");
  }

  struct Experiment {
    std::string name;
    std::vector<double> thetas;
    Profile profile;
  };
  std::vector<Experiment> experiments;
  for (const char* name : {"blowup", "blowdown"}) {
    if (!cfg.contains(name)) continue;
    const json& e = cfg.at(name);
    require_keys(e, name, {"thetas", "profile", "exact"});
    bool exact = false;
    if (e.contains("exact")) {
      if (!e.at("exact").is_boolean()) throw ConfigError(std::string(name) + ".exact must be a boolean");
      exact = e.at("exact").get<bool>();
    }
    std::vector<double> thetas = parse_number_list(e, "thetas", name);
    if (thetas.empty()) throw ConfigError(std::string(name) + ".thetas must not be empty");
    const bool up = std::string(name) == "blowup";
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      if (!(thetas[i] > 0.0)) throw ConfigError(std::string(name) + ".thetas must be positive");
      if (!up && thetas[i] > 1.0) throw ConfigError("blowdown.thetas must lie in (0, 1]");
      if (i > 0 && (up ? thetas[i] <= thetas[i - 1] : thetas[i] >= thetas[i - 1])) {
        throw ConfigError(std::string(name) + ".thetas must be strictly " + (up ? "increasing" : "decreasing"));
      }
    }
    experiments.push_back({name, std::move(thetas),
                           parse_profile(section(e, "profile"), grid, exact, ctx.config_dir())});
  }

  ctx.start(grid_json(grid));
  json summary = json::object();
  for (const Experiment& e : experiments) {
    const ScalingTable t = e.name == "blowup"
                               ? blowup_experiment(e.profile.field, params, e.thetas, method, e.profile.exact)
                               : blowdown_experiment(e.profile.field, params, e.thetas, method, e.profile.exact);
    ctx.write_text(e.name + ".csv", scaling_csv(t));
    json s = {{"base_energy_tilde", t.base_energy_tilde},
              {"sign_report", t.sign_report},
              {"truncated", t.truncated},
              {"warnings", t.warnings},
              {"rows", t.rows.size()}};
    if (t.sign_report) {
      s["message"] = e.name == "blowup" ? "E_tilde(phi) >= 0: blow-up scaling needs a negative homogeneous energy"
                                        : "E_tilde(phi) <= 0: blow-down scaling needs a positive homogeneous energy";
    }
    if (!t.rows.empty()) s["ratio_spread"] = t.ratio_spread();
    if (t.truncated) s["truncated_at"] = t.truncated_at;
    out << e.name << ": E_tilde(phi) = " << g17(t.base_energy_tilde) << ", " << t.rows.size() << " rows"
        << (t.sign_report ? " (sign report)" : "") << (t.truncated ? " (truncated)" : "") << '\n';
    summary[e.name] = s;
  }
  ctx.write_json("scaling.json", summary);
  return exit_code::success;
}

// ---------------------------------------------------------------- verify

int cmd_verify(RunContext& ctx, std::ostream& out) {
  const json& cfg = ctx.config();
  require_keys(cfg, "config", {"snapshot", "params", "omega", "variant", "tolerances"});
  const Params params = parse_params(section(cfg, "params"), false);
  const KineticVariant variant = parse_variant_field(cfg);
  const Tolerances tol = parse_tolerances(cfg);
  std::optional<double> omega;
  if (cfg.contains("omega") && !cfg.at("omega").is_null()) {
    if (!cfg.at("omega").is_number() || !std::isfinite(cfg.at("omega").get<double>())) {
      throw ConfigError("omega must be a finite number");
    }
    omega = cfg.at("omega").get<double>();
  }
  if (!section(cfg, "snapshot").is_string()) throw ConfigError("snapshot must be a path string");
  const Field u = read_snapshot(resolve(ctx.config_dir(), cfg.at("snapshot").get<std::string>()));

  ctx.start(grid_json(u.grid()));
  const IdentityReport r = verify_identities(u, params, omega, variant);
  auto check = [](double value, double limit) {
    return json{{"value", value}, {"tolerance", limit}, {"pass", std::abs(value) < limit}};
  };
  const json checks = {
      {"virial", check(r.virial_relative(), tol.virial)},
      {"pohozaev", check(r.pohozaev_relative(), tol.pohozaev)},
      {"el", check(r.el_residual_rel, tol.el)},
  };
  bool passed = true;
  for (const auto& c : checks) passed = passed && c.at("pass").get<bool>();
  ctx.write_json("verify.json", {{"passed", passed},
                                 {"omega_supplied", omega.has_value()},
                                 {"checks", checks},
                                 {"report", to_json(r)}});
  for (const auto& [name, c] : checks.items()) {
    out << name << ": " << g17(c.at("value").get<double>()) << " (tolerance " << g17(c.at("tolerance").get<double>())
        << ") " << (c.at("pass").get<bool>() ? "PASS" : "FAIL") << '\n';
  }
  return passed ? exit_code::success : exit_code::verification_failed;
}

using Command = int (*)(RunContext&, std::ostream&);

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table = {
      {"energy", cmd_energy},   {"minimize", cmd_minimize}, {"curve", cmd_curve},
      {"best-constant", cmd_best_constant}, {"scaling", cmd_scaling}, {"verify", cmd_verify},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"energy", "minimize", "curve", "best-constant", "scaling", "verify"};
  return names;
}

int execute(const RunOptions& options, std::ostream& out, std::ostream& err) {
  std::unique_ptr<RunContext> ctx;
  int code = exit_code::success;
  std::string message;
  try {
    const auto it = command_table().find(options.subcommand);
    if (it == command_table().end()) throw ConfigError("unknown subcommand '" + options.subcommand + "'");
    if (options.workers < 1) throw ConfigError("--workers must be at least 1");
    json cfg = load_json(options.config_path);
    ctx = std::make_unique<RunContext>(options, std::move(cfg));
    code = it->second(*ctx, out);
    if (code == exit_code::verification_failed) message = "verification failed";
  } catch (const Error& e) {
    code = e.exit_code();
    message = e.what();
  } catch (const json::exception& e) {
    code = exit_code::config_error;
    message = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    code = exit_code::config_error;
    message = e.what();
  } catch (const std::exception& e) {
    code = exit_code::numerical_failure;
    message = e.what();
  }
  if (!message.empty()) err << "srsp " << options.subcommand << ": " << message << '\n';
  if (ctx) {
    try {
      ctx->finish(code, message);
    } catch (const std::exception& e) {
      err << "srsp: could not finalize manifest: " << e.what() << '\n';
    }
  }
  return code;
}

}  // namespace srsp::cli
