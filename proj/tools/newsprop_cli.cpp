// newsprop: validate inputs, simulate synthetic bundles, and run the
// pre/post news-effect regressions.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "newsprop/pipeline.hpp"

namespace {

struct Flags {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
};

void add_common(CLI::App* cmd, Flags& f) {
  for (const char* name : {"firms", "prices", "indices", "news", "edges", "mode", "polarity", "windows", "out",
                           "seed", "threads"}) {
    f.options[name] = cmd->add_option(std::string("--") + name, f.values[name]);
  }
  f.options["mode"]->description("own, supplier, client, a comma list, or all");
  f.options["polarity"]->description("positive, negative, a comma list, or all");
  f.options["windows"]->description("comma-separated window lengths in trading days");
  for (const char* name : {"robust-se", "strict", "export-panel"}) {
    f.switches[name] = false;
    f.options[name] = cmd->add_flag(std::string("--") + name, f.switches[name]);
  }
  cmd->add_option("--config", f.config_path, "key=value file; flags override its values");
}

// File values first, then explicitly given flags.
newsprop::RunConfig resolve(const Flags& f, newsprop::SimConfig* sim) {
  newsprop::RunConfig cfg;
  if (!f.config_path.empty()) {
    for (const auto& [key, value] : newsprop::read_key_values(f.config_path)) {
      if (cfg.set(key, value)) continue;
      if (sim) {
        sim->set(key, value);
        continue;
      }
      throw newsprop::EngineError(newsprop::ErrorKind::Config, "unknown config key '" + key + "'");
    }
  }
  for (const auto& [name, opt] : f.options) {
    if (opt->count() == 0) continue;
    if (const auto it = f.switches.find(name); it != f.switches.end()) {
      cfg.set(name, it->second ? "true" : "false");
    } else {
      cfg.set(name, f.values.at(name));
    }
  }
  if (sim && f.options.at("seed")->count() > 0) sim->seed = cfg.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"News sentiment propagation event study"};
  app.require_subcommand(1);

  Flags validate_flags, run_flags, sim_flags;
  auto* validate = app.add_subcommand("validate", "Load every input in audit mode and report rejected rows");
  add_common(validate, validate_flags);
  auto* run = app.add_subcommand("run", "Build panels, fit every (mode, polarity, window) cell, write reports");
  add_common(run, run_flags);
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic bundle with known injected effects");
  add_common(sim, sim_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return newsprop::cmd_validate(resolve(validate_flags, nullptr), std::cout);
    if (run->parsed()) return newsprop::cmd_run(resolve(run_flags, nullptr), std::cout);
    if (sim->parsed()) {
      newsprop::SimConfig sc;
      const auto cfg = resolve(sim_flags, &sc);
      return newsprop::cmd_simulate(cfg, sc, std::cout);
    }
  } catch (const newsprop::EngineError& e) {
    std::cerr << "error (" << newsprop::to_string(e.kind()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
