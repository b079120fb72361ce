#include "dirac/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dirac/errors.hpp"

namespace dirac {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const nlohmann::json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void atomic_write(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigurationError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigurationError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw DomainError("CsvTable: row width does not match header");
  rows.push_back(std::move(row));
}

std::string CsvTable::render(const std::string& hash) const {
  std::ostringstream os;
  os << "# config_hash=" << hash << " tool=dirac-lab " << kToolVersion << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
  return os.str();
}

void write_snapshot(const fs::path& stem, const Eigen::ArrayXXd& data, const std::string& hash,
                    const nlohmann::json& extra) {
  static_assert(std::endian::native == std::endian::little, "snapshots are written little-endian");
  const Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = data;
  std::string bytes(static_cast<std::size_t>(rm.size()) * sizeof(double), '\0');
  std::memcpy(bytes.data(), rm.data(), bytes.size());
  fs::path bin = stem, meta = stem;
  bin += ".bin";
  meta += ".json";
  atomic_write(bin, bytes);
  nlohmann::json j = extra;
  j["dtype"] = "float64";
  j["byte_order"] = "little";
  j["order"] = "row-major";
  j["shape"] = {data.rows(), data.cols()};
  j["config_hash"] = hash;
  j["file"] = bin.filename().string();
  atomic_write(meta, j.dump(2) + "\n");
}

Eigen::ArrayXXd read_snapshot(const fs::path& stem) {
  fs::path bin = stem, meta = stem;
  bin += ".bin";
  meta += ".json";
  std::ifstream mj(meta);
  if (!mj) throw ConfigurationError("missing snapshot sidecar " + meta.string());
  const auto j = nlohmann::json::parse(mj);
  const auto rows = j.at("shape").at(0).get<Eigen::Index>(), cols = j.at("shape").at(1).get<Eigen::Index>();
  Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
  std::ifstream in(bin, std::ios::binary);
  in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!in) throw ConfigurationError("snapshot payload shorter than its shape");
  return rm;
}

}  // namespace dirac
