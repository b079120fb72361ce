#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirac::cli {

enum ExitCode : int { kOk = 0, kNotSatisfied = 1, kUsage = 2, kConvergence = 3, kStability = 4, kInternal = 5 };

/// Malformed flags or configuration.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Artifact {
  std::string name;  // file name under --out
  std::string text;
};

struct RunContext {
  std::string command;
  nlohmann::json config;  // effective parameters, defaults filled in
  std::string hash;
  std::optional<std::filesystem::path> out;
  std::vector<Artifact> artifacts;
  nlohmann::json stages = nlohmann::json::array();
  nlohmann::json diagnostics = nlohmann::json::object();

  /// Times `fn` and records it as a named stage in the manifest.
  template <typename F>
  auto stage(const std::string& name, F&& fn);
};

struct Command {
  std::string name;
  std::string help;
  nlohmann::json defaults;  // schema: value types and defaults
  int (*run)(RunContext&);
};

const std::vector<Command>& commands();

/// Overlays `overrides` on `defaults`; unknown keys and type mismatches are
/// usage errors.
nlohmann::json merge_config(const nlohmann::json& defaults, const nlohmann::json& overrides);

}  // namespace dirac::cli

#include <chrono>

template <typename F>
auto dirac::cli::RunContext::stage(const std::string& name, F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  auto record = [&] {
    stages.push_back({{"name", name},
                      {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}});
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto r = fn();
      record();
      return r;
    }
  } catch (...) {
    record();
    throw;
  }
}
