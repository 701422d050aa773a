#pragma once

#include "srsp/constants.hpp"
#include "srsp/minimize.hpp"
#include "srsp/resample.hpp"
#include "srsp/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace srsp::cli {

using json = nlohmann::json;

/// Reads and parses a JSON document. Throws ParseError.
json load_json(const std::filesystem::path& path);

/// Throws ConfigError if obj (an object) has a key outside allowed.
void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed);

Grid parse_grid(const json& obj);
/// Full minimization parameters; rho is required only when need_rho.
Params parse_params(const json& obj, bool need_rho);
KineticVariant parse_variant_field(const json& parent, const char* key = "variant");
MinimizeConfig parse_minimize(const json& obj, const std::filesystem::path& base_dir);
AscentConfig parse_ascent(const json& obj);
ResampleMethod parse_method(const json& parent);

std::vector<double> parse_number_list(const json& parent, const char* key, const std::string& where);
std::vector<std::uint64_t> parse_seed_list(const json& parent, const char* key = "seeds");

/// Resolves a relative path against the directory holding the config.
std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p);

struct Tolerances {
  double virial = 1e-4;
  double pohozaev = 1e-4;
  double el = 1e-6;
};
Tolerances parse_tolerances(const json& parent);

json to_json(const EnergyBreakdown& b);
json to_json(const IdentityReport& r);
json to_json(const MinimizeConfig& c);
json grid_json(const Grid& g);

}  // namespace srsp::cli
