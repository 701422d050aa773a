#include "cli/run.hpp"

#include "srsp/snapshot.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#ifndef SRSP_VERSION
#define SRSP_VERSION "0.0.0"
#endif

namespace srsp::cli {

std::string version_string() { return std::string("srsp ") + SRSP_VERSION; }

RunContext::RunContext(RunOptions options, json config)
    : options_(std::move(options)), config_(std::move(config)), started_(std::chrono::steady_clock::now()) {}

std::filesystem::path RunContext::config_dir() const {
  const std::filesystem::path dir = options_.config_path.parent_path();
  return dir.empty() ? std::filesystem::path(".") : dir;
}

void RunContext::start(const json& grid) {
  manifest_ = {
      {"subcommand", options_.subcommand},
      {"code_version", version_string()},
      {"csv_schema_version", csv_schema_version},
      {"config_path", options_.config_path.string()},
      {"config", config_},
      {"grid", grid},
      {"workers", options_.workers},
      {"seed", options_.seed ? json(*options_.seed) : json(nullptr)},
      {"status", "running"},
      {"wall_time_seconds", nullptr},
  };
  write_manifest();
}

void RunContext::finish(int exit_code, const std::string& error) {
  if (manifest_.is_null()) return;
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started_;
  manifest_["wall_time_seconds"] = elapsed.count();
  manifest_["exit_code"] = exit_code;
  manifest_["status"] = exit_code == 0 ? "finished" : "failed";
  if (!error.empty()) manifest_["error"] = error;
  write_manifest();
}

void RunContext::write_manifest() const { write_json("manifest.json", manifest_); }

void RunContext::write_json(const std::string& name, const json& doc) const {
  write_text(name, doc.dump(2) + "\n");
}

void RunContext::write_text(const std::string& name, const std::string& text) const {
  write_file_atomic(path(name), text);
}

void parallel_for(int count, int workers, const std::function<void(int)>& task) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(count, 0)));
  std::atomic<int> next{0};
  auto drain = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(workers, 1, std::max(count, 1));
  if (threads == 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(drain);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace srsp::cli
