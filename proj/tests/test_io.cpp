#include <doctest.h>

#include <filesystem>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dirac/errors.hpp"
#include "dirac/io.hpp"

using namespace dirac;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "dirac_io_test";
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config_hash depends on content, not key order") {
  const auto a = nlohmann::json::parse(R"({"q": 1, "g": 0.5})");
  const auto b = nlohmann::json::parse(R"({"g": 0.5, "q": 1})");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) != config_hash(nlohmann::json::parse(R"({"q": 1, "g": 0.3})")));
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 6.283185307179586, -2.5e-300, 0.0}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("CsvTable renders a provenance line and rows") {
  CsvTable t{{"mu", "d", "J_z"}, {}};
  t.add_row({0.0, 1.0, 0.5});
  t.add_row({1.0, 2.0, 0.1484985376});
  CHECK_THROWS_AS(t.add_row({1.0}), DomainError);
  const std::string s = t.render("0123456789abcdef");
  CHECK(s.rfind("# config_hash=0123456789abcdef tool=dirac-lab ", 0) == 0);
  CHECK(s.find("\nmu,d,J_z\n0,1,0.5\n1,2,0.1484985376\n") != std::string::npos);
}

TEST_CASE("atomic_write replaces content and leaves no temporary") {
  const fs::path d = scratch_dir();
  atomic_write(d / "sub" / "x.json", "first");
  atomic_write(d / "sub" / "x.json", "second");
  CHECK(slurp(d / "sub" / "x.json") == "second");
  CHECK_FALSE(fs::exists(d / "sub" / "x.json.tmp"));
}

TEST_CASE("snapshot round trip") {
  const fs::path d = scratch_dir();
  Eigen::ArrayXXd a(3, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = 10 * i + j + 0.25;
  write_snapshot(d / "snap", a, "feedfacefeedface", {{"h", 1.0}});
  CHECK(fs::file_size(d / "snap.bin") == 12 * sizeof(double));
  const auto meta = nlohmann::json::parse(slurp(d / "snap.json"));
  CHECK(meta.at("shape") == nlohmann::json::array({3, 4}));
  CHECK(meta.at("order") == "row-major");
  CHECK(meta.at("dtype") == "float64");
  CHECK(meta.at("config_hash") == "feedfacefeedface");
  CHECK(meta.at("h") == 1.0);
  // Row-major: the second stored value is a(0, 1).
  const std::string raw = slurp(d / "snap.bin");
  double second;
  std::memcpy(&second, raw.data() + sizeof(double), sizeof(double));
  CHECK(second == a(0, 1));
  CHECK((read_snapshot(d / "snap") == a).all());
}
