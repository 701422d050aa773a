#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Spectral experiments for the relativistic Schrodinger-Poisson energy"};
  app.set_version_flag("--version", srsp::cli::version_string());
  app.require_subcommand(1);

  srsp::cli::RunOptions options;
  std::uint64_t seed = 0;
  for (const std::string& name : srsp::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", options.config_path, "JSON config")->required();
    sub->add_option("--out", options.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", options.workers, "concurrent starts")->capture_default_str();
    sub->add_option("--seed", seed, "overrides the seed list of the config");
    sub->callback([&options, name] { options.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--seed") > 0) options.seed = seed;
  }
  return srsp::cli::execute(options, std::cout, std::cerr);
}
