#include "newsprop/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include "newsprop/csv.hpp"
#include "newsprop/panel.hpp"
#include "newsprop/report.hpp"

namespace newsprop {

namespace {

bool parse_flag(const std::string& key, const std::string& value) {
  if (value.empty() || value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw EngineError(ErrorKind::Config, "bad boolean for '" + key + "': '" + value + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value, Parse parse) {
  std::vector<T> out;
  for (auto tok : csv::split(value)) {
    const auto v = parse(tok);
    if (!v) throw EngineError(ErrorKind::Config, "bad value '" + std::string(tok) + "' for '" + key + "'");
    out.push_back(*v);
  }
  return out;
}

std::string trim_copy(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

void write_histograms(const Dataset& data, const std::filesystem::path& out) {
  const auto registry = data.firms.ids();
  const auto mh = mention_histogram(data.news, &registry);
  std::vector<double> mentions, per_firm, p_pos, p_neu, p_neg;
  for (const auto& [count, articles] : mh.mentions_per_article) {
    mentions.insert(mentions.end(), articles, static_cast<double>(count));
  }
  for (const auto& [firm, count] : mh.articles_per_firm) per_firm.push_back(static_cast<double>(count));
  for (const auto& e : data.news.events()) {
    p_pos.push_back(e.p_pos);
    p_neu.push_back(e.p_neu);
    p_neg.push_back(e.p_neg);
  }
  csv::write_atomic(out / "hist_mentions_per_article.csv", histogram_to_csv(histogram(mentions, IntegerCounts{})));
  csv::write_atomic(out / "hist_articles_per_firm.csv", histogram_to_csv(histogram(per_firm, IntegerCounts{})));
  const std::pair<const char*, const std::vector<double>*> probs[] = {
      {"hist_p_pos.csv", &p_pos}, {"hist_p_neu.csv", &p_neu}, {"hist_p_neg.csv", &p_neg}};
  for (const auto& [name, values] : probs) {
    const auto bins = values->empty() ? std::vector<std::pair<double, std::size_t>>{}
                                      : histogram(*values, FixedWidth{0.1});
    csv::write_atomic(out / name, histogram_to_csv(bins));
  }
}

std::string network_csv(const Dataset& data) {
  const auto registry = data.firms.ids();
  std::string out = "year,scope,n_firms,n_links,max_indegree,max_outdegree\n";
  for (const auto& [year, snap] : data.graph.snapshots()) {
    for (const bool listed : {false, true}) {
      const auto s = snap.stats(listed ? &registry : nullptr);
      out += std::to_string(year) + "," + (listed ? "listed" : "all") + "," + std::to_string(s.n_firms) + "," +
             std::to_string(s.n_links) + "," + std::to_string(s.max_indegree) + "," +
             std::to_string(s.max_outdegree) + "\n";
    }
  }
  return out;
}

}  // namespace

bool RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "firms") paths.firms = value;
  else if (key == "prices") paths.prices = value;
  else if (key == "indices") paths.indices = value;
  else if (key == "news") paths.news = value;
  else if (key == "edges") paths.edges = value;
  else if (key == "out") out = value;
  else if (key == "mode") {
    modes = value == "all" ? std::vector<Mode>{Mode::Own, Mode::Supplier, Mode::Client}
                           : parse_list<Mode>(key, value, parse_mode);
  } else if (key == "polarity") {
    polarities = value == "all" ? std::vector<Polarity>{Polarity::Positive, Polarity::Negative}
                                : parse_list<Polarity>(key, value, parse_polarity);
  } else if (key == "windows") {
    windows = parse_list<int>(key, value, [](std::string_view t) -> std::optional<int> {
      const auto v = csv::parse_int(t);
      if (!v) return std::nullopt;
      return static_cast<int>(*v);
    });
  } else if (key == "robust-se") robust_se = parse_flag(key, value);
  else if (key == "strict") strict = parse_flag(key, value);
  else if (key == "export-panel") export_panel = parse_flag(key, value);
  else if (key == "seed") {
    const auto v = csv::parse_int(value);
    if (!v || *v < 0) throw EngineError(ErrorKind::Config, "bad seed '" + value + "'");
    seed = static_cast<std::uint64_t>(*v);
  } else if (key == "threads") {
    const auto v = csv::parse_int(value);
    if (!v || *v < 1) throw EngineError(ErrorKind::Config, "bad thread count '" + value + "'");
    threads = static_cast<unsigned>(*v);
  } else {
    return false;
  }
  return true;
}

void RunConfig::validate() const {
  if (modes.empty() || polarities.empty()) throw EngineError(ErrorKind::Config, "no mode or polarity selected");
  if (windows.empty()) throw EngineError(ErrorKind::Config, "no windows selected");
  std::set<int> seen;
  for (int w : windows) {
    if (w < 1) throw EngineError(ErrorKind::Config, "windows must be positive");
    if (!seen.insert(w).second) throw EngineError(ErrorKind::Config, "window " + std::to_string(w) + " repeated");
  }
}

std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto body = trim_copy(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw EngineError(ErrorKind::Config, path.string() + ":" + std::to_string(n) + ": expected key=value");
    }
    out.emplace_back(trim_copy(std::string_view(body).substr(0, eq)), trim_copy(std::string_view(body).substr(eq + 1)));
  }
  return out;
}

int cmd_validate(const RunConfig& config, std::ostream& log) {
  IngestReport report;
  const auto data = load_dataset(config.paths, IngestOptions{.strict = false}, &report);
  for (const auto& [file, r] : report.rejected) {
    log << file << ": " << to_string(r.kind) << ": " << r.message << "\n";
  }
  log << "firms " << data.firms.size() << ", price series " << data.prices.all().size() << ", index series "
      << data.indices.all().size() << ", news events " << data.news.events().size() << ", snapshots "
      << data.graph.snapshots().size() << "\n";
  log << report.count() << " rejected\n";
  return config.strict && report.count() > 0 ? 1 : 0;
}

std::vector<CellOutcome> run_cells(const Dataset& data, const RunConfig& config) {
  std::vector<CellOutcome> cells;
  for (auto m : config.modes) {
    for (auto p : config.polarities) {
      for (int w : config.windows) {
        CellOutcome c;
        c.mode = m;
        c.polarity = p;
        c.w = w;
        cells.push_back(c);
      }
    }
  }
  const FitOptions opts{config.robust_se ? Covariance::HC1 : Covariance::Homoskedastic};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      auto& c = cells[k];
      try {
        const auto panel = build_panel(data, c.mode, c.polarity, c.w);
        c.n_obs = panel.rows.size();
        c.n_dropped = panel.drops.size();
        if (config.export_panel) {
          csv::write_atomic(config.out / ("panel_" + std::string(to_string(c.mode)) + "_" +
                                          std::string(to_string(c.polarity)) + "_w" + std::to_string(c.w) + ".csv"),
                            panel_to_csv(panel));
        }
        c.fit = fit(panel, opts);
        c.ok = true;
      } catch (const EngineError& e) {
        c.ok = false;
        c.error = std::string(to_string(e.kind())) + ": " + e.what();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, std::max<std::size_t>(cells.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  return cells;
}

int cmd_run(const RunConfig& config, std::ostream& log) {
  config.validate();
  IngestReport report;
  const auto data = load_dataset(config.paths, IngestOptions{.strict = config.strict}, &report);
  if (report.count() > 0) log << report.count() << " input rows rejected (run validate for details)\n";
  std::filesystem::create_directories(config.out);

  const auto cells = run_cells(data, config);
  std::vector<FitResult> fits;
  std::string cells_csv = "mode,polarity,w,status,n_obs,dropped,message\n";
  for (const auto& c : cells) {
    if (c.ok) fits.push_back(c.fit);
    std::string msg = c.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    cells_csv += std::string(to_string(c.mode)) + "," + std::string(to_string(c.polarity)) + "," +
                 std::to_string(c.w) + "," + (c.ok ? "ok" : "failed") + "," + std::to_string(c.n_obs) + "," +
                 std::to_string(c.n_dropped) + "," + msg + "\n";
    if (!c.ok) {
      log << "cell " << to_string(c.mode) << "/" << to_string(c.polarity) << "/w=" << c.w << " failed: " << c.error
          << "\n";
    }
  }
  const auto rows = effect_plot_data(fits);
  csv::write_atomic(config.out / "fits.csv", fits_to_csv(fits));
  csv::write_atomic(config.out / "effects.csv", effects_to_csv(rows));
  csv::write_atomic(config.out / "table.txt", coefficient_table(fits));
  csv::write_atomic(config.out / "cells.csv", cells_csv);
  csv::write_atomic(config.out / "network.csv", network_csv(data));
  write_histograms(data, config.out);

  log << fits.size() << " of " << cells.size() << " cells fitted\n";
  if (fits.empty()) return 1;
  return fits.size() == cells.size() ? 0 : 3;
}

int cmd_simulate(const RunConfig& config, const SimConfig& sim, std::ostream& log) {
  config.validate();
  sim.validate();
  const auto result = simulate(sim, config.threads);
  write_bundle(result.data, config.out);
  std::vector<ExpectedBetas> expected;
  for (int w : config.windows) {
    const auto rows = expected_betas(sim, w);
    expected.insert(expected.end(), rows.begin(), rows.end());
  }
  csv::write_atomic(config.out / "expected.csv", expected_to_csv(expected));
  csv::write_atomic(config.out / "sim_config.txt", sim.to_text());
  log << "simulated " << result.data.firms.size() << " firms, " << result.trading_days.size() << " trading days, "
      << result.data.news.events().size() << " news events into " << config.out.string() << "\n";
  return 0;
}

}  // namespace newsprop
