#include "commands.hpp"

#include <cmath>
#include <numbers>

#include "dirac/ab_interference.hpp"
#include "dirac/angmom.hpp"
#include "dirac/errors.hpp"
#include "dirac/fields.hpp"
#include "dirac/gauge.hpp"
#include "dirac/io.hpp"
#include "dirac/vortex.hpp"

namespace dirac::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> list(const json& cfg, const char* key) { return cfg.at(key).get<std::vector<double>>(); }

void require_nonempty(const std::vector<double>& v, const char* key) {
  if (v.empty()) throw UsageError(std::string("'") + key + "' must not be empty");
}

json stamp(json j, const RunContext& ctx) {
  j["config_hash"] = ctx.hash;
  j["tool_version"] = kToolVersion;
  return j;
}

void add_json(RunContext& ctx, const std::string& name, const json& j) {
  ctx.artifacts.push_back({name, stamp(j, ctx).dump(2) + "\n"});
}

void add_csv(RunContext& ctx, const std::string& name, const CsvTable& t) {
  ctx.artifacts.push_back({name, t.render(ctx.hash)});
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

int cmd_check(RunContext& ctx) {
  const auto& c = ctx.config;
  const double q = c.at("q"), g = c.at("g"), tol = c.at("tol");
  if (!(tol > 0.0)) throw UsageError("'tol' must be > 0");
  const auto rep = check_quantization(q, g, tol);
  json j = rep;
  j["string_invisible"] = string_invisibility(q, g, tol);
  j["transition_at_2pi"] = complex_json(transition_function(q, g, 2 * kPi));
  j["tolerance"] = tol;
  add_json(ctx, "check.json", j);
  return rep.satisfied ? kOk : kNotSatisfied;
}

int cmd_fields(RunContext& ctx) {
  const auto& c = ctx.config;
  const PhysicalConfig<double> cfg{c.at("q"), c.at("g"), c.at("mu")};
  cfg.validate();
  const TubeSpec<double> tube{cfg.g, c.at("tube_R"), cfg.mu};
  tube.validate();
  const auto radii = list(c, "radii");
  require_nonempty(radii, "radii");

  CsvTable t{{"r", "E_r", "local_charge", "B_r", "uniform_Bz", "proca_Bz"}, {}};
  for (double r : radii) {
    const Vec3d x(0, 0, r);
    const double proca = cfg.mu > 0 ? proca_tube_profile(cfg.g, cfg.mu, r) : std::nan("");
    t.add_row({r, yukawa_electric_field(cfg, x).z(), local_charge(cfg, r), monopole_field(cfg, x).z(),
               uniform_tube_field(tube, r), proca});
  }
  add_csv(ctx, "fields.csv", t);

  json disp = json::array();
  for (double k : list(c, "k")) disp.push_back({{"k", k}, {"omega", proca_dispersion(k, cfg.mu)}});
  json j{{"expected_total_flux", 4 * kPi * cfg.g},
         {"uniform_tube_total_flux", uniform_tube_total_flux(tube)},
         {"dispersion", disp}};
  if (cfg.mu > 0) j["proca_tube_total_flux"] = proca_tube_total_flux(cfg.g, cfg.mu);
  add_json(ctx, "fields.json", j);
  return kOk;
}

int cmd_holonomy(RunContext& ctx) {
  const auto& c = ctx.config;
  const double q = c.at("q"), g = c.at("g"), r = c.at("r"), loop_rho = c.at("loop_rho");
  const auto thetas = list(c, "theta");
  require_nonempty(thetas, "theta");
  const VectorPotential north = [g](const Vec3d& x) { return wu_yang_potential(Patch::North, g, x); };

  CsvTable caps{{"theta", "flux", "predicted", "phase_re", "phase_im", "error"}, {}};
  ctx.stage("caps", [&] {
    for (double t : thetas) {
      const auto h = refined_loop_holonomy(north, [&](int n) { return LoopPath::polar_circle(r, t, n); }, q);
      caps.add_row({t, h.flux, 2 * kPi * g * (1 - std::cos(t)), h.phase.real(), h.phase.imag(), h.error});
    }
  });
  add_csv(ctx, "holonomy.csv", caps);

  // Local charge at the loop radius against the AB phase around the same flux.
  json screening = json::array();
  for (double mu : list(c, "mu")) {
    const TubeSpec<double> tube{g, c.at("tube_R"), mu};
    const VectorPotential A = [&](const Vec3d& x) { return tube_potential(tube, x); };
    const auto h = refined_loop_holonomy(A, [&](int n) { return LoopPath::horizontal_circle(0, 0, 0, loop_rho, n); }, q);
    json row{{"mu", mu},
             {"local_charge", local_charge(PhysicalConfig<double>{q, g, mu}, loop_rho)},
             {"ab_flux", h.flux},
             {"ab_phase", complex_json(h.phase)}};
    if (mu > 0) row["proca_tube_total_flux"] = proca_tube_total_flux(g, mu);
    screening.push_back(row);
  }
  add_json(ctx, "holonomy.json", {{"screening", screening}, {"string_flux", 4 * kPi * g},
                                  {"quantized", check_quantization(q, g, c.at("tol")).satisfied}});
  return kOk;
}

int cmd_angmom(RunContext& ctx) {
  const auto& c = ctx.config;
  const auto mus = list(c, "mu"), ds = list(c, "d");
  require_nonempty(mus, "mu");
  require_nonempty(ds, "d");
  const QuadratureSpec unit{c.at("eps_exclusion"), c.at("r_max"), c.at("tol"), c.at("refinements").get<int>()};
  const auto table = ctx.stage("sweep", [&] { return angular_momentum_sweep(c.at("q"), c.at("g"), mus, ds, unit); });
  CsvTable t{{"mu", "d", "J_z", "err", "converged"}, {}};
  json failed = json::array();
  for (std::size_t i = 0; i < mus.size(); ++i) {
    for (std::size_t j = 0; j < ds.size(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      t.add_row({mus[i], ds[j], table.jz(ii, jj), table.err(ii, jj), table.converged(ii, jj) ? 1.0 : 0.0});
      if (!table.converged(ii, jj)) failed.push_back({{"mu", mus[i]}, {"d", ds[j]}});
    }
  }
  add_csv(ctx, "angmom.csv", t);
  ctx.diagnostics["failed_cells"] = failed;
  return failed.empty() ? kOk : kConvergence;
}

int cmd_absim(RunContext& ctx) {
  const auto& c = ctx.config;
  const double q = c.at("q");
  const int n = c.at("n"), steps = c.at("steps");
  if (steps < 0) throw UsageError("'steps' must be >= 0");
  ScatteringSetup sc;
  sc.n = n;
  sc.dt = c.at("dt");
  sc.mass = c.at("mass");
  sc.k0 = c.at("k0");
  sc.sigma = c.at("sigma");
  sc.packet_x = c.at("packet_x");
  sc.steps = steps;
  const bool snapshots = c.at("snapshots").get<int>() != 0, cut_check = c.at("cut_check").get<int>() != 0;

  // Fails with a stability error before any stepping.
  const WaveGrid start = sc.initial_grid();
  const WaveGrid free = ctx.stage("free", [&] { return propagate_with_flux(start, std::nullopt, sc.steps); });
  const double far = 0.5 * n * sc.h;
  json runs = json::array();
  std::vector<std::pair<std::string, Eigen::ArrayXXd>> snaps{{"density_free", free.density()}};
  const auto fluxes = list(c, "fluxes");
  for (std::size_t k = 0; k < fluxes.size(); ++k) {
    const double flux = fluxes[k];
    const WaveGrid w = ctx.stage("flux_" + std::to_string(k),
                                 [&] { return propagate_with_flux(start, sc.flux_line(q, flux), sc.steps); });
    json row{{"flux", flux},
             {"q_flux", q * flux},
             {"invisibility_metric", invisibility_metric(w, free, far)},
             {"invisibility_metric_full", invisibility_metric(w, free)},
             {"norm", w.norm()}};
    if (cut_check) {
      const WaveGrid l = ctx.stage("cut_" + std::to_string(k), [&] {
        return propagate_with_flux(start, sc.flux_line(q, flux, CutDirection::Left), sc.steps);
      });
      row["cut_dependence"] = (w.density() - l.density()).abs().maxCoeff() / w.density().maxCoeff();
    }
    runs.push_back(row);
    snaps.emplace_back("density_flux_" + std::to_string(k), w.density());
  }

  json fringes = json::array();
  const auto fringe_fluxes = list(c, "fringe_fluxes");
  if (!fringe_fluxes.empty()) {
    DoubleSlitSetup ds;
    ds.n = n;
    ds.dt = sc.dt;
    ds.mass = sc.mass;
    ds.k0 = sc.k0;
    ds.steps = c.at("slit_steps");
    if (n < ds.detector_x + 40) throw UsageError("fringe measurement needs n >= " + std::to_string(ds.detector_x + 40));
    const auto free_pattern = ctx.stage("slit_free", [&] { return ds.detector_pattern(std::nullopt); });
    CsvTable det{{"y", "free"}, {}};
    std::vector<Eigen::ArrayXd> patterns;
    for (std::size_t k = 0; k < fringe_fluxes.size(); ++k) {
      const double flux = fringe_fluxes[k];
      patterns.push_back(
          ctx.stage("slit_" + std::to_string(k), [&] { return ds.detector_pattern(ds.flux_line(q, flux)); }));
      const auto m = measure_fringe_shift(ds, free_pattern, patterns.back());
      const double predicted = two_path_fringe_shift(q, flux);
      double diff = std::remainder(m.displacement - predicted, 1.0);
      fringes.push_back({{"flux", flux},
                         {"predicted", predicted},
                         {"measured", m.displacement},
                         {"difference", diff},
                         {"relative_error", predicted > 0 ? std::abs(diff) / predicted : std::abs(diff)},
                         {"fringe_period", m.fringe_period}});
      det.columns.push_back("flux_" + std::to_string(k));
    }
    for (int j = 0; j < n; ++j) {
      std::vector<double> row{double(j) * ds.h, free_pattern(j)};
      for (const auto& p : patterns) row.push_back(p(j));
      det.add_row(row);
    }
    add_csv(ctx, "absim_detector.csv", det);
  }

  // Central horizontal slice of every final density.
  CsvTable slice{{"x"}, {}};
  for (const auto& s : snaps) slice.columns.push_back(s.first);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row{double(i) * sc.h};
    for (const auto& s : snaps) row.push_back(s.second(i, n / 2));
    slice.add_row(row);
  }
  add_csv(ctx, "absim_slice.csv", slice);
  add_json(ctx, "absim_metrics.json", {{"free_vs_free", invisibility_metric(free, free)},
                                       {"far_side_x", far},
                                       {"runs", runs},
                                       {"fringes", fringes}});
  if (snapshots && ctx.out)
    for (const auto& s : snaps) write_snapshot(*ctx.out / s.first, s.second, ctx.hash, {{"h", sc.h}, {"axes", {"x", "y"}}});
  return kOk;
}

HiggsModel model_from(const json& c) {
  const HiggsModel m{c.at("q"), c.at("v"), c.at("lambda")};
  m.validate();
  return m;
}

VortexSolution solve_from(RunContext& ctx, const HiggsModel& m) {
  const auto& c = ctx.config;
  const int n = c.at("n");
  double r_max = c.at("r_max");
  if (r_max == 0.0) r_max = 20.0 * m.correlation_length();
  try {
    return ctx.stage("solve", [&] { return solve_vortex(m, n, r_max, c.at("grid"), c.at("tol")); });
  } catch (const ConvergenceError& e) {
    ctx.diagnostics["residual_history"] = e.history();
    throw;
  }
}

int cmd_vortex(RunContext& ctx) {
  const HiggsModel m = model_from(ctx.config);
  const auto sol = solve_from(ctx, m);
  const auto& p = sol.profile;
  const Eigen::VectorXd B = vortex_magnetic_field(m, p), e = vortex_energy_density(m, p);
  CsvTable t{{"rho", "f", "a", "B_z", "energy_density"}, {}};
  for (Eigen::Index i = 0; i < p.rho.size(); ++i) t.add_row({p.rho(i), p.f(i), p.a(i), B(i), e(i)});
  add_csv(ctx, "vortex_profile.csv", t);
  json j = sol.tension;
  j["n"] = p.n;
  j["beta"] = m.beta();
  j["photon_mass"] = photon_mass_of(m);
  j["flux"] = vortex_flux(m, p);
  j["expected_flux"] = 2 * kPi * p.n / m.q;
  add_json(ctx, "vortex_tension.json", j);
  ctx.diagnostics["residual_history"] = sol.residual_history;
  return kOk;
}

int cmd_confine(RunContext& ctx) {
  const HiggsModel m = model_from(ctx.config);
  const auto Ls = list(ctx.config, "L");
  require_nonempty(Ls, "L");
  const auto sol = solve_from(ctx, m);
  CsvTable t{{"L", "E"}, {}};
  for (double L : Ls) t.add_row({L, confinement_energy(sol.tension, L)});
  add_csv(ctx, "confine.csv", t);
  add_json(ctx, "confine.json", {{"tension", sol.tension}, {"n", sol.profile.n}});
  return kOk;
}

}  // namespace

json merge_config(const json& defaults, const json& overrides) {
  if (!overrides.is_object()) throw UsageError("configuration must be a JSON object");
  json merged = defaults;
  for (const auto& [key, value] : overrides.items()) {
    if (!defaults.contains(key)) throw UsageError("unknown configuration key '" + key + "'");
    const json& d = defaults.at(key);
    const bool ok = d.is_number_integer()  ? value.is_number_integer()
                    : d.is_number()        ? value.is_number()
                    : d.is_array()         ? value.is_array() && std::all_of(value.begin(), value.end(),
                                                                              [](const json& x) { return x.is_number(); })
                                           : value.type() == d.type();
    if (!ok) throw UsageError("configuration key '" + key + "' has the wrong type");
    merged[key] = d.is_number_float() ? json(value.get<double>()) : value;
  }
  return merged;
}

const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"check", "Dirac condition 2qg in Z for a charge and a pole", {{"q", 1.0}, {"g", 0.5}, {"tol", 1e-9}}, cmd_check},
      {"fields",
       "Screened fields, local charge, tube profiles and dispersion",
       {{"q", 1.0}, {"g", 0.5}, {"mu", 1.0}, {"tube_R", 1.0}, {"radii", {0.5, 1.0, 2.0, 5.0, 10.0}}, {"k", {0.0, 1.0, 2.0, 3.0}}},
       cmd_fields},
      {"holonomy",
       "Wu-Yang cap holonomies and the AB phase against screening",
       {{"q", 1.0},
        {"g", 0.5},
        {"r", 1.0},
        {"theta", {0.5, 1.0, kPi / 2, 2.5, 3.0}},
        {"mu", {0.0, 0.5, 1.0, 2.0}},
        {"tube_R", 1.0},
        {"loop_rho", 5.0},
        {"tol", 1e-9}},
       cmd_holonomy},
      {"angmom",
       "Field angular momentum sweep J_z(mu, d)",
       {{"q", 1.0},
        {"g", 0.5},
        {"mu", {0.0, 0.5, 1.0}},
        {"d", {1.0, 2.0, 4.0, 8.0}},
        {"eps_exclusion", 0.125},
        {"r_max", 20.0},
        {"tol", 1e-6},
        {"refinements", 4}},
       cmd_angmom},
      {"absim",
       "Lattice wave propagation past a flux line; invisibility and fringe shifts",
       {{"q", 1.0},
        {"fluxes", {2 * kPi, kPi}},
        {"fringe_fluxes", {kPi / 2, kPi, 3 * kPi / 2}},
        {"n", 512},
        {"dt", 0.5},
        {"mass", 1.0},
        {"k0", 1.0},
        {"sigma", 16.0},
        {"packet_x", 140.0},
        {"steps", 560},
        {"slit_steps", 1000},
        {"cut_check", 1},
        {"snapshots", 1}},
       cmd_absim},
      {"vortex",
       "Nielsen-Olesen vortex profile and tension",
       {{"q", 1.0}, {"v", 1.0}, {"lambda", 2.0}, {"n", 1}, {"r_max", 0.0}, {"grid", 1024}, {"tol", 1e-10}},
       cmd_vortex},
      {"confine",
       "Pole-antipole string energy E(L) = T L",
       {{"q", 1.0},
        {"v", 1.0},
        {"lambda", 2.0},
        {"n", 1},
        {"r_max", 0.0},
        {"grid", 1024},
        {"tol", 1e-10},
        {"L", {0.0, 1.0, 2.0, 5.0, 10.0}}},
       cmd_confine},
  };
  return all;
}

}  // namespace dirac::cli
