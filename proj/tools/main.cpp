// dirac-lab: command-line front end to the verification modules.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "dirac/errors.hpp"
#include "dirac/io.hpp"

using namespace dirac;
using namespace dirac::cli;
using nlohmann::json;

namespace {

std::string flag_name(std::string key) {
  for (auto& ch : key)
    if (ch == '_') ch = '-';
  return "--" + key;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Per-subcommand storage for generated flags.
struct FlagStore {
  std::map<std::string, double> reals;
  std::map<std::string, long long> ints;
  std::map<std::string, std::vector<double>> lists;
  std::map<std::string, CLI::Option*> options;
};

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  const auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"dirac-lab: Dirac quantization with a massive photon, checked numerically"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir;
  app.add_option("--config", config_path, "JSON parameter file; its values override flags");
  app.add_option("--out", out_dir, "Directory for result files and the run manifest");

  std::map<std::string, FlagStore> stores;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    subs[cmd.name] = sub;
    auto& st = stores[cmd.name];
    for (const auto& [key, value] : cmd.defaults.items()) {
      const std::string desc = "default " + value.dump();
      if (value.is_number_integer())
        st.options[key] = sub->add_option(flag_name(key), st.ints[key], desc);
      else if (value.is_number())
        st.options[key] = sub->add_option(flag_name(key), st.reals[key], desc);
      else
        st.options[key] = sub->add_option(flag_name(key), st.lists[key], desc)->expected(0, -1)->delimiter(',');
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands())
    if (subs[c.name]->parsed()) cmd = &c;

  RunContext ctx;
  ctx.command = cmd->name;
  if (!out_dir.empty()) ctx.out = out_dir;
  int code = kOk;
  json error;
  try {
    json flags = json::object();
    auto& st = stores[cmd->name];
    for (const auto& [key, opt] : st.options) {
      if (opt->count() == 0) continue;
      if (st.ints.count(key)) flags[key] = st.ints[key];
      else if (st.reals.count(key)) flags[key] = st.reals[key];
      else {
        // A bare list flag means an empty list; CLI11 would report a single zero.
        json list = json::array();
        for (const auto& raw : opt->results())
          if (!raw.empty() && raw != "{}") list.push_back(std::stod(raw));
        flags[key] = list;
      }
    }
    ctx.config = merge_config(cmd->defaults, flags);
    if (!config_path.empty()) {
      json file = read_config_file(config_path);
      if (file.is_object() && file.contains("command")) {
        if (file["command"] != cmd->name) throw UsageError("config file is for command " + file["command"].dump());
        file.erase("command");
      }
      ctx.config = merge_config(ctx.config, file);
    }
    ctx.hash = config_hash({{"command", cmd->name}, {"params", ctx.config}});
    code = cmd->run(ctx);
  } catch (const UsageError& e) {
    code = kUsage, error = e.what();
  } catch (const DomainError& e) {
    code = kUsage, error = e.what();
  } catch (const ConvergenceError& e) {
    code = kConvergence, error = e.what();
    ctx.diagnostics["best_estimate"] = e.best_estimate();
  } catch (const AccuracyError& e) {
    code = kConvergence, error = e.what();
  } catch (const ConfigurationError& e) {
    code = kStability, error = e.what();
  } catch (const std::exception& e) {
    code = kInternal, error = e.what();
  }

  json manifest{{"tool", "dirac-lab"},
                {"version", kToolVersion},
                {"command", cmd->name},
                {"config", ctx.config},
                {"config_hash", ctx.hash},
                {"exit_code", code},
                {"status", code == kOk ? "ok" : code == kNotSatisfied ? "not_satisfied" : "error"},
                {"stages", ctx.stages},
                {"diagnostics", ctx.diagnostics},
                {"started_utc", utc_now()},
                {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  if (!error.is_null()) manifest["error"] = error;

  try {
    if (ctx.out) {
      for (const auto& a : ctx.artifacts) atomic_write(*ctx.out / a.name, a.text);
      atomic_write(*ctx.out / "manifest.json", manifest.dump(2) + "\n");
    } else {
      for (const auto& a : ctx.artifacts) std::cout << a.text;
      std::cerr << manifest.dump() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "dirac-lab: failed to write results: " << e.what() << "\n";
    return kInternal;
  }
  if (!error.is_null()) std::cerr << "dirac-lab " << cmd->name << ": " << error.get<std::string>() << "\n";
  return code;
}
