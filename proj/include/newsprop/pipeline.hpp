#pragma once

// Batch commands behind the command-line tool.

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "newsprop/dataset.hpp"
#include "newsprop/regress.hpp"
#include "newsprop/sim.hpp"

namespace newsprop {

/// Window grid used when none is given.
inline const std::vector<int> kDefaultWindows = {1, 2, 3, 4, 5, 30, 180, 365};

struct RunConfig {
  DatasetPaths paths;
  std::vector<Mode> modes = {Mode::Own};
  std::vector<Polarity> polarities = {Polarity::Positive};
  std::vector<int> windows = kDefaultWindows;
  std::filesystem::path out = "out";
  bool robust_se = false;
  bool strict = false;
  bool export_panel = false;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  /// Applies one setting by its flag name without the dashes ("windows",
  /// "robust-se", ...). Returns false for an unknown key; throws
  /// EngineError(Config) for a bad value.
  bool set(const std::string& key, const std::string& value);

  /// Throws EngineError(Config) unless windows are positive and distinct and
  /// at least one mode and polarity is selected.
  void validate() const;
};

/// Reads `key=value` lines; blank lines and lines starting with '#' are
/// skipped. Throws EngineError(Io / Config).
std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path);

/// Loads every input in audit mode and prints each rejection plus a summary
/// line "<n> rejected". Returns 0 unless strict mode saw a rejection.
int cmd_validate(const RunConfig& config, std::ostream& log);

struct CellOutcome {
  Mode mode = Mode::Own;
  Polarity polarity = Polarity::Positive;
  int w = 1;
  bool ok = false;
  std::string error;
  FitResult fit;
  std::size_t n_obs = 0;
  std::size_t n_dropped = 0;
};

/// Fits every (mode, polarity, w) cell and writes fits.csv, effects.csv,
/// table.txt, cells.csv, network.csv and the hist_*.csv files into
/// config.out. Returns 0 when every cell fitted, 3 when some failed, 1 when
/// all failed.
int cmd_run(const RunConfig& config, std::ostream& log);

/// Runs the cells on an already loaded dataset, in (mode, polarity, w) order.
std::vector<CellOutcome> run_cells(const Dataset& data, const RunConfig& config);

/// Writes the simulated bundle, expected.csv for config.windows, and
/// sim_config.txt into config.out.
int cmd_simulate(const RunConfig& config, const SimConfig& sim, std::ostream& log);

}  // namespace newsprop
