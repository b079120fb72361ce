#pragma once

// Output helpers: deterministic CSV/JSON text, atomic file replacement and
// flat float64 snapshots with a JSON sidecar.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dirac {

inline constexpr const char* kToolVersion = "0.3.0";

std::uint64_t fnv1a64(std::string_view bytes);

/// Hex FNV-1a hash of the compact dump of `config` (keys are sorted by json).
std::string config_hash(const nlohmann::json& config);

/// Shortest round-tripping decimal form, identical across runs.
std::string format_double(double x);

/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  /// First line is "# config_hash=<hash> tool=dirac-lab <version>".
  std::string render(const std::string& hash) const;
};

/// Row-major little-endian float64 payload at `stem`.bin, metadata at `stem`.json.
void write_snapshot(const std::filesystem::path& stem, const Eigen::ArrayXXd& data, const std::string& hash,
                    const nlohmann::json& extra = nlohmann::json::object());
Eigen::ArrayXXd read_snapshot(const std::filesystem::path& stem);

}  // namespace dirac
