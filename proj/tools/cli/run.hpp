#pragma once

#include "cli/config.hpp"

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace srsp::cli {

inline constexpr int csv_schema_version = 1;
std::string version_string();

struct RunOptions {
  std::string subcommand;
  std::filesystem::path config_path;
  std::filesystem::path out_dir = "out";
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

/**
 * Output directory of one run. The manifest goes out first with status
 * "running" and is rewritten on finish with the wall time and exit code.
 */
class RunContext {
 public:
  RunContext(RunOptions options, json config);

  const RunOptions& options() const noexcept { return options_; }
  const json& config() const noexcept { return config_; }
  std::filesystem::path config_dir() const;

  void start(const json& grid);
  void finish(int exit_code, const std::string& error = {});

  void write_json(const std::string& name, const json& doc) const;
  void write_text(const std::string& name, const std::string& text) const;
  std::filesystem::path path(const std::string& name) const { return options_.out_dir / name; }

 private:
  void write_manifest() const;

  RunOptions options_;
  json config_;
  json manifest_;
  std::chrono::steady_clock::time_point started_;
};

/**
 * Runs task(0..count-1) on up to workers threads. The first failure in index
 * order is rethrown after all tasks settle.
 */
void parallel_for(int count, int workers, const std::function<void(int)>& task);

}  // namespace srsp::cli
