#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(DIRAC_LAB_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "dirac_cli_test" / name;
  fs::remove_all(d);
  return d;
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("check exit codes") {
  CHECK(run("check --q 1 --g 0.5") == 0);
  CHECK(run("check --q 2 --g 0.25") == 0);
  CHECK(run("check --q 1 --g 0.3") == 1);
  CHECK(run("check --q x") == 2);
  CHECK(run("check --bogus 1") == 2);
  CHECK(run("") == 2);
  CHECK(run("check --q 1 --g 0.3 --tol 0.5") == 0);

  const fs::path out = fresh("check");
  REQUIRE(run("check --q 1 --g 0.5 --out " + out.string()) == 0);
  const auto rep = json::parse(slurp(out / "check.json"));
  CHECK(rep.at("n_nearest") == 1);
  CHECK(rep.at("satisfied") == true);
  CHECK(rep.contains("config_hash"));
  const auto manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("exit_code") == 0);
  CHECK(manifest.at("config").at("tol") == 1e-9);
}

TEST_CASE("config file overrides flags and rejects unknown keys") {
  const fs::path dir = fresh("config");
  write(dir / "ok.json", R"({"q": 1, "g": 0.3})");
  CHECK(run("check --g 0.5 --config " + (dir / "ok.json").string()) == 1);
  write(dir / "unknown.json", R"({"q": 1, "charge": 2})");
  CHECK(run("check --config " + (dir / "unknown.json").string()) == 2);
  write(dir / "type.json", R"({"q": "one"})");
  CHECK(run("check --config " + (dir / "type.json").string()) == 2);
  write(dir / "broken.json", "{");
  CHECK(run("check --config " + (dir / "broken.json").string()) == 2);
  CHECK(run("check --config " + (dir / "missing.json").string()) == 2);

  // The manifest is written on failure too.
  const fs::path out = fresh("config_out");
  CHECK(run("check --config " + (dir / "unknown.json").string() + " --out " + out.string()) == 2);
  const auto m = json::parse(slurp(out / "manifest.json"));
  CHECK(m.at("exit_code") == 2);
  CHECK(m.contains("error"));
}

TEST_CASE("angmom sweep output and failures") {
  const fs::path out = fresh("angmom");
  REQUIRE(run("angmom --mu 0,1 --d 1,2,4 --out " + out.string()) == 0);
  std::istringstream csv(slurp(out / "angmom.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);
  std::getline(csv, line);
  CHECK(line == "mu,d,J_z,err,converged");
  std::getline(csv, line);
  CHECK(line.rfind("0,1,0.5", 0) == 0);

  CHECK(run("angmom --mu 0 --d") == 2);
  CHECK(run("angmom --mu 1 --d 2 --tol 1e-16 --refinements 2") == 3);
}

TEST_CASE("vortex and confine") {
  const fs::path a = fresh("vortex_a"), b = fresh("vortex_b");
  REQUIRE(run("vortex --lambda 2 --n 1 --out " + a.string()) == 0);
  REQUIRE(run("vortex --lambda 2 --n 1 --out " + b.string()) == 0);
  const auto t = json::parse(slurp(a / "vortex_tension.json"));
  CHECK(t.at("bogomolny_ratio").get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  // Deterministic data files; only the manifest carries timings.
  CHECK(slurp(a / "vortex_tension.json") == slurp(b / "vortex_tension.json"));
  CHECK(slurp(a / "vortex_profile.csv") == slurp(b / "vortex_profile.csv"));
  CHECK(slurp(a / "vortex_profile.csv").find("rho,f,a,B_z,energy_density") != std::string::npos);

  const fs::path c = fresh("vortex_c");
  REQUIRE(run("vortex --lambda 4 --out " + c.string()) == 0);
  CHECK(json::parse(slurp(c / "vortex_tension.json")).at("bogomolny_ratio").get<double>() > 1.0);

  CHECK(run("vortex --n 0") == 2);
  CHECK(run("vortex --n 1 --grid 64") == 2);
  CHECK(run("vortex --n 1 --tol 1e-30") == 3);

  const fs::path e = fresh("confine");
  REQUIRE(run("confine --L 0,5,10 --out " + e.string()) == 0);
  CHECK(slurp(e / "confine.csv").find("\n0,0\n") != std::string::npos);
}

TEST_CASE("absim small run and stability failure") {
  const fs::path out = fresh("absim");
  REQUIRE(run("absim --n 128 --sigma 8 --packet-x 36 --steps 110 --fringe-fluxes --out " + out.string()) == 0);
  const auto m = json::parse(slurp(out / "absim_metrics.json"));
  CHECK(m.at("free_vs_free") == 0.0);
  CHECK(m.at("runs").at(0).at("invisibility_metric").get<double>() < 1e-2);
  CHECK(m.at("runs").at(1).at("invisibility_metric").get<double>() > 0.1);
  CHECK(m.at("runs").at(0).at("cut_dependence").get<double>() < 1e-10);
  const auto side = json::parse(slurp(out / "density_free.json"));
  CHECK(side.at("shape") == json::array({128, 128}));
  CHECK(fs::file_size(out / "density_free.bin") == 128 * 128 * sizeof(double));

  const fs::path bad = fresh("absim_bad");
  CHECK(run("absim --n 128 --dt 5 --fringe-fluxes --out " + bad.string()) == 4);
  const auto manifest = json::parse(slurp(bad / "manifest.json"));
  CHECK(manifest.at("stages").empty());
}

TEST_CASE("fields and holonomy") {
  const fs::path out = fresh("fields");
  REQUIRE(run("fields --g 0.5 --mu 2 --out " + out.string()) == 0);
  const auto f = json::parse(slurp(out / "fields.json"));
  CHECK(f.at("proca_tube_total_flux").get<double>() == doctest::Approx(f.at("expected_total_flux").get<double>()));
  const fs::path h = fresh("holonomy");
  REQUIRE(run("holonomy --out " + h.string()) == 0);
  const auto j = json::parse(slurp(h / "holonomy.json"));
  const auto& rows = j.at("screening");
  for (const auto& r : rows) CHECK(r.at("ab_phase") == rows.at(0).at("ab_phase"));
}
