#include "cli/commands.hpp"
#include "srsp/errors.hpp"
#include "srsp/snapshot.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <sstream>

using namespace srsp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path root;
  Sandbox() {
    root = fs::temp_directory_path() / "srsp_cli_test";
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Sandbox() { fs::remove_all(root); }

  fs::path config(const std::string& name, const json& doc) const {
    const fs::path p = root / name;
    write_file_atomic(p, doc.dump());
    return p;
  }
};

int run(const std::string& sub, const fs::path& config, const fs::path& out, int workers = 1) {
  cli::RunOptions o;
  o.subcommand = sub;
  o.config_path = config;
  o.out_dir = out;
  o.workers = workers;
  std::ostringstream sink;
  return cli::execute(o, sink, sink);
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

const json small_minimize = {
    {"grid", {{"n", 16}, {"L", 16.0}}},
    {"params", {{"alpha", 1.0}, {"beta", 1.0}, {"p", 2.5}, {"rho", 1.0}}},
    {"minimize", {{"initial_step", 1.0}}},
};

}  // namespace

TEST_CASE("configuration errors exit 2 before any output") {
  Sandbox box;
  const fs::path bad = box.root / "bad.json";
  write_file_atomic(bad, "{\"grid\": ");
  CHECK(run("minimize", bad, box.root / "a") == exit_code::config_error);
  CHECK_FALSE(fs::exists(box.root / "a" / "manifest.json"));

  json typo = small_minimize;
  typo["minimize"]["max_iter"] = 3;
  CHECK(run("minimize", box.config("typo.json", typo), box.root / "b") == exit_code::config_error);

  json range = small_minimize;
  range["params"]["p"] = 3.0;
  CHECK(run("minimize", box.config("range.json", range), box.root / "c") == exit_code::config_error);

  const json one_rho = {{"grid", small_minimize["grid"]},
                        {"params", {{"alpha", 1.0}, {"beta", 1.0}, {"p", 2.5}}},
                        {"rhos", {0.5}}};
  CHECK(run("curve", box.config("one.json", one_rho), box.root / "d") == exit_code::config_error);
  CHECK(run("minimize", box.root / "missing.json", box.root / "e") == exit_code::config_error);
  CHECK(run("nonsense", box.config("ok.json", small_minimize), box.root / "f") == exit_code::config_error);
}

TEST_CASE("zero-budget minimize writes a complete non-converged result") {
  Sandbox box;
  json cfg = small_minimize;
  cfg["minimize"]["max_iters"] = 0;
  const fs::path out = box.root / "out";
  REQUIRE(run("minimize", box.config("zero.json", cfg), out) == exit_code::success);
  for (const char* f : {"manifest.json", "result.json", "identities.json", "field.spsf", "trace.csv", "slice_x.csv"}) {
    CHECK(fs::exists(out / f));
  }
  for (const auto& entry : fs::directory_iterator(out)) CHECK(entry.path().extension() != ".tmp");
  const json result = read_json(out / "result.json");
  CHECK(result["converged"] == false);
  CHECK(result["iterations"] == 0);
  CHECK(mass(read_snapshot(out / "field.spsf")) == doctest::Approx(1.0).epsilon(1e-12));

  const json manifest = read_json(out / "manifest.json");
  CHECK(manifest["subcommand"] == "minimize");
  CHECK(manifest["config"] == cfg);
  CHECK(manifest["grid"]["n"] == 16);
  CHECK(manifest["status"] == "finished");
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["wall_time_seconds"].get<double>() >= 0.0);
  CHECK(manifest["code_version"].get<std::string>().rfind("srsp ", 0) == 0);
}

TEST_CASE("unbounded regime exits 4") {
  Sandbox box;
  const json cfg = {
      {"grid", {{"n", 32}, {"L", 16.0}}},
      {"params", {{"alpha", 1.0}, {"beta", 5.0}, {"p", 8.0 / 3.0}, {"rho", 0.66}}},
      {"minimize", {{"initial_step", 1.0}, {"init", {{"kind", "gaussian"}, {"width", 2.0}}}}},
  };
  const fs::path out = box.root / "out";
  CHECK(run("minimize", box.config("unbounded.json", cfg), out) == exit_code::unbounded);
  CHECK(read_json(out / "result.json")["status"] == "unbounded");
  CHECK(read_json(out / "manifest.json")["exit_code"] == 4);
}

TEST_CASE("multi-start minimize is reproducible across worker counts") {
  Sandbox box;
  json cfg = small_minimize;
  cfg["seeds"] = {3, 4};
  const fs::path c = box.config("multi.json", cfg);
  REQUIRE(run("minimize", c, box.root / "w1", 1) == exit_code::success);
  REQUIRE(run("minimize", c, box.root / "w3", 3) == exit_code::success);
  for (const char* f : {"result.json", "identities.json", "field.spsf", "trace.csv"}) {
    CHECK(read_file(box.root / "w1" / f) == read_file(box.root / "w3" / f));
  }
  CHECK(read_json(box.root / "w1" / "result.json")["starts"].size() == 3);
}

TEST_CASE("energy and verify on snapshots") {
  Sandbox box;
  const Grid g = make_grid(16, 16.0);
  write_snapshot(box.root / "zero.spsf", Field(g));
  write_snapshot(box.root / "gauss.spsf", gaussian(g, 1.0));
  write_file_atomic(box.root / "cut.spsf", encode_snapshot(gaussian(g, 1.0)).substr(0, 100));
  const json params = {{"alpha", 1.0}, {"beta", 1.0}, {"p", 2.5}};

  REQUIRE(run("energy", box.config("e0.json", {{"snapshot", "zero.spsf"}, {"params", params}}), box.root / "e0") ==
          exit_code::success);
  CHECK(read_json(box.root / "e0" / "energy.json")["breakdown"]["total"] == 0.0);
  CHECK(run("energy", box.config("ec.json", {{"snapshot", "cut.spsf"}, {"params", params}}), box.root / "ec") ==
        exit_code::config_error);

  CHECK(run("verify", box.config("v0.json", {{"snapshot", "zero.spsf"}, {"params", params}}), box.root / "v0") ==
        exit_code::success);
  CHECK(run("verify", box.config("vg.json", {{"snapshot", "gauss.spsf"}, {"params", params}}), box.root / "vg") ==
        exit_code::verification_failed);
  const json report = read_json(box.root / "vg" / "verify.json");
  CHECK(report["passed"] == false);
  CHECK(report["checks"]["el"]["tolerance"] == 1e-6);
}

TEST_CASE("best-constant verdict table and scaling outputs") {
  Sandbox box;
  const json bc = {{"grid", {{"n", 32}, {"L", 16.0}}},
                   {"ascent", {{"steps", 0}, {"init_noise", 0.0}}},
                   {"pairs", {{1.0, 3.0}}}};
  REQUIRE(run("best-constant", box.config("bc.json", bc), box.root / "bc") == exit_code::success);
  CHECK(read_json(box.root / "bc" / "estimate.json")["s_lower"].get<double>() == doctest::Approx(0.685).epsilon(2e-2));
  CHECK(read_file(box.root / "bc" / "verdicts.csv").rfind("alpha,beta,lhs,rhs_lower,verdict\n1,3,1,", 0) == 0);

  json no_pairs = bc;
  no_pairs.erase("pairs");
  REQUIRE(run("best-constant", box.config("bc2.json", no_pairs), box.root / "bc2") == exit_code::success);
  CHECK_FALSE(fs::exists(box.root / "bc2" / "verdicts.csv"));

  const json sc = {
      {"grid", {{"n", 32}, {"L", 16.0}}},
      {"params", {{"alpha", 1.0}, {"beta", 1.0}, {"p", 8.0 / 3.0}}},
      {"blowup", {{"thetas", {1.0, 2.0}}, {"profile", {{"kind", "gaussian"}, {"width", 1.0}, {"mass", 0.05}}}}},
  };
  REQUIRE(run("scaling", box.config("sc.json", sc), box.root / "sc") == exit_code::success);
  CHECK(read_json(box.root / "sc" / "scaling.json")["blowup"]["sign_report"] == true);
  CHECK(read_file(box.root / "sc" / "blowup.csv") == "theta,E,E_tilde,hdot_half,mass,method,kinetic_gap\n");

  json wrong_p = sc;
  wrong_p["params"]["p"] = 2.5;
  CHECK(run("scaling", box.config("sc2.json", wrong_p), box.root / "sc2") == exit_code::config_error);
}

TEST_CASE("curve emits sorted points and verdicts") {
  Sandbox box;
  const json cfg = {{"grid", {{"n", 16}, {"L", 16.0}}},
                    {"params", {{"alpha", 1.0}, {"beta", 1.0}, {"p", 2.5}}},
                    {"rhos", {2.0, 1.0, 1.5}},
                    {"minimize", {{"initial_step", 1.0}}}};
  REQUIRE(run("curve", box.config("curve.json", cfg), box.root / "c") == exit_code::success);
  std::istringstream csv(read_file(box.root / "c" / "curve.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "rho,i_rho,ratio,converged,iterations,omega,el_residual_rel,pohozaev_rel,virial_rel,"
                "h_half_over_sqrt_rho,status");
  std::vector<double> rhos;
  while (std::getline(csv, line)) rhos.push_back(std::stod(line.substr(0, line.find(','))));
  CHECK(rhos == std::vector<double>{1.0, 1.5, 2.0});
  const json summary = read_json(box.root / "c" / "curve.json");
  CHECK(summary["verdicts"]["all_ratios_below_half"].is_boolean());

  json starved = cfg;
  starved["minimize"]["max_iters"] = 1;
  REQUIRE(run("curve", box.config("starved.json", starved), box.root / "s") == exit_code::success);
  CHECK(read_json(box.root / "s" / "curve.json")["verdicts"]["all_ratios_below_half"] == "unavailable");
  CHECK(fs::exists(box.root / "s" / "curve.csv"));
}
