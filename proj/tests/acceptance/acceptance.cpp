// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "newsprop/panel.hpp"
#include "newsprop/pipeline.hpp"
#include "newsprop/regress.hpp"
#include "newsprop/sim.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace newsprop;
using namespace newsprop::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Direct-effect calibration config, 1000 firms and about 10000 events.
SimConfig recovery_config(std::uint64_t seed) {
  SimConfig c;
  c.n_firms = 1000;
  c.n_sectors = 20;
  c.n_markets = 2;
  c.n_days = 730;
  c.edge_prob = 0.003;
  c.news_rate = 10;
  c.alpha_pos = 1.0;
  c.alpha_neu = 0.5;
  c.alpha_neg = 0.5;
  c.gamma_pre = 0.3;
  c.gamma_post = 0.9;
  c.gamma_sup = 0.09;
  c.gamma_cli = 0.09;
  c.market_vol = 0.01;
  c.idio_vol = 0.005;
  c.seed = seed;
  return c;
}

const ExpectedBetas& expected_for(const std::vector<ExpectedBetas>& rows, Mode m) {
  for (const auto& r : rows) {
    if (r.mode == m && r.polarity == Polarity::Positive) return r;
  }
  throw std::logic_error("no expected row");
}

Outcome window_arithmetic() {
  const auto t0 = Clock::now();
  const std::vector<Date> days = {ymd(2021, 6, 3),  ymd(2021, 6, 4),  ymd(2021, 6, 7),
                                  ymd(2021, 6, 8),  ymd(2021, 6, 9),  ymd(2021, 6, 10),
                                  ymd(2021, 6, 11), ymd(2021, 6, 14), ymd(2021, 6, 15)};
  const std::vector<double> closes = {100, 101, 99, 102, 104, 103, 108, 110, 107};
  const auto s = series("F", days, closes);
  const auto b = window_blocks(s, ymd(2021, 6, 11), 3);
  auto dates = [&](TradingPosition f, TradingPosition l) { return std::vector<Date>(&days[f], &days[l] + 1); };
  bool ok = b && dates(b->a_first, b->a_last) == std::vector<Date>{ymd(2021, 6, 3), ymd(2021, 6, 4), ymd(2021, 6, 7)} &&
            dates(b->b_first, b->b_last) == std::vector<Date>{ymd(2021, 6, 8), ymd(2021, 6, 9), ymd(2021, 6, 10)} &&
            dates(b->c_first, b->c_last) == std::vector<Date>{ymd(2021, 6, 11), ymd(2021, 6, 14), ymd(2021, 6, 15)};
  const double mean_a = (100.0 + 101 + 99) / 3, mean_b = (102.0 + 104 + 103) / 3, mean_c = (108.0 + 110 + 107) / 3;
  const double hand_pre = (std::log(mean_b) - std::log(mean_a)) / 3 * 100;
  const double hand_post = (std::log(mean_c) - std::log(mean_b)) / 3 * 100;
  const auto pre = window_change(s, ymd(2021, 6, 11), 3, Period::Pre);
  const auto post = window_change(s, ymd(2021, 6, 11), 3, Period::Post);
  ok = ok && pre && post && std::abs(pre->value - hand_pre) < 1e-9 && std::abs(post->value - hand_post) < 1e-9;
  // Weekend news anchors on Monday.
  const auto sat = window_change(s, ymd(2021, 6, 12), 1, Period::Post);
  ok = ok && sat && sat->anchor == ymd(2021, 6, 14);
  const double t = seconds_since(t0);
  ok = ok && t < 1.0;
  return {ok, fmt("pre %.9f post %.9f, %.4f s", pre ? pre->value : NAN, post ? post->value : NAN, t)};
}

std::vector<Panel> random_panels() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> pairs(10, 500);
  std::uniform_int_distribution<int> sectors(1, 20);
  std::vector<Panel> out;
  for (int i = 0; i < 100; ++i) out.push_back(random_panel(rng, pairs(rng), sectors(rng)));
  return out;
}

Outcome estimator_equivalence(const std::vector<Panel>& panels) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t failures = 0;
  for (const auto& p : panels) {
    const auto f = fit(p);
    const auto o = dummy_ldlt(p);
    const double got[6] = {f.beta_pre, f.beta_post, f.beta_x, f.se_pre, f.se_post, f.se_x};
    const double want[6] = {o.coef(0), o.coef(1), o.coef(2), o.se(0), o.se(1), o.se(2)};
    for (int k = 0; k < 6; ++k) {
      worst = std::max(worst, std::abs(got[k] - want[k]) / std::max(1.0, std::abs(want[k])));
      if (!close(got[k], want[k], 1e-8)) ++failures;
    }
  }
  const double t = seconds_since(t0);
  return {failures == 0 && t < 30.0,
          fmt("%zu panels, worst relative gap %.2e, %zu mismatches, %.2f s", panels.size(), worst, failures, t)};
}

Outcome difference_oracle(const std::vector<Panel>& panels) {
  double worst = 0.0;
  std::size_t failures = 0;
  for (const auto& p : panels) {
    const auto f = fit(p);
    const auto o = dummy_qr(p, true);
    for (const auto& [got, want] : {std::pair{f.diff, o.coef(1)}, std::pair{f.diff_se, o.se(1)}}) {
      worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
      if (!close(got, want, 1e-10)) ++failures;
    }
  }
  return {failures == 0, fmt("%zu panels, worst relative gap %.2e", panels.size(), worst)};
}

struct SeedFits {
  FitResult own;
  FitResult supplier;
  std::size_t events = 0;
};

std::vector<SeedFits> recovery_runs() {
  std::vector<SeedFits> out;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto sim = simulate(recovery_config(seed));
    SeedFits s;
    s.events = sim.data.news.events().size();
    s.own = fit(build_panel(sim.data, Mode::Own, Polarity::Positive, 1));
    s.supplier = fit(build_panel(sim.data, Mode::Supplier, Polarity::Positive, 1));
    out.push_back(s);
  }
  return out;
}

Outcome direct_recovery(const std::vector<SeedFits>& runs, double elapsed) {
  const auto& e = expected_for(expected_betas(recovery_config(1), 1), Mode::Own);
  int both = 0, pre_in = 0, post_in = 0, ordered = 0;
  std::size_t min_events = SIZE_MAX;
  for (const auto& r : runs) {
    const bool a = std::abs(r.own.beta_pre - e.beta_pre) <= 2 * r.own.se_pre;
    const bool b = std::abs(r.own.beta_post - e.beta_post) <= 2 * r.own.se_post;
    pre_in += a;
    post_in += b;
    both += a && b;
    ordered += r.own.beta_post > r.own.beta_pre && r.own.beta_pre > 0;
    min_events = std::min(min_events, r.events);
  }
  const bool ok = both >= 19 && ordered == 20 && min_events >= 5000 && elapsed < 300;
  return {ok, fmt("expected pre %.4f post %.4f; both within 2 SE in %d/20 (pre %d, post %d), "
                  "ordering in %d/20, min events %zu, %.1f s",
                  e.beta_pre, e.beta_post, both, pre_in, post_in, ordered, min_events, elapsed)};
}

Outcome indirect_recovery(const std::vector<SeedFits>& runs, double elapsed) {
  const auto& e = expected_for(expected_betas(recovery_config(1), 1), Mode::Supplier);
  int good = 0;
  double worst_ratio = 0.0;
  for (const auto& r : runs) {
    const bool near = std::abs(r.supplier.beta_post - e.injected_post) <= 2 * r.supplier.se_post;
    const double ratio = r.supplier.beta_post / r.own.beta_post;
    worst_ratio = std::max(worst_ratio, ratio);
    good += near && ratio < 0.2;
  }
  return {good >= 19 && elapsed < 300,
          fmt("injected %.4f; %d/20 seeds within 2 SE and below 20%% of direct, max ratio %.3f", e.injected_post,
              good, worst_ratio)};
}

Outcome size_control() {
  const auto t0 = Clock::now();
  int ok_seeds = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto cfg = recovery_config(seed);
    cfg.gamma_pre = cfg.gamma_post = cfg.gamma_sup = cfg.gamma_cli = 0.0;
    cfg.n_firms = 400;
    const auto f = fit(build_panel(simulate(cfg).data, Mode::Own, Polarity::Positive, 1));
    const double t = std::max(std::abs(f.beta_pre / f.se_pre), std::abs(f.beta_post / f.se_post));
    worst = std::max(worst, t);
    ok_seeds += t < 3.0;
  }
  return {ok_seeds >= 95, fmt("%d/100 seeds with |t| < 3 for both, max |t| %.2f, %.1f s", ok_seeds, worst,
                              seconds_since(t0))};
}

// Complete-window check by linear scan of the calendar.
bool complete(const DailySeries* s, Date d, int w) {
  if (!s) return false;
  const auto& dates = s->dates();
  long p = -1;
  for (std::size_t i = 0; i < dates.size(); ++i) {
    if (dates[i] >= d) {
      p = static_cast<long>(i);
      break;
    }
  }
  return p >= 0 && p - 2 * w >= 0 && p + w - 1 < static_cast<long>(dates.size());
}

Outcome panel_counts() {
  int checked = 0, mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig cfg;
    cfg.n_firms = 25;
    cfg.n_sectors = 3;
    cfg.n_days = 400;
    cfg.edge_prob = 0.15;
    cfg.news_rate = 3;
    cfg.co_mention_prob = 0.3;
    cfg.seed = seed;
    auto data = simulate(cfg).data;
    if (data.news.events().size() > 100) continue;
    // Truncate a few firms' histories so some windows are incomplete.
    std::map<std::string, DailySeries> prices;
    int k = 0;
    for (const auto& [id, s] : data.prices.all()) {
      std::vector<DailyPoint> pts;
      const std::size_t skip = (k++ % 4 == 0) ? 120 : 0;
      for (std::size_t i = skip; i < s.size(); ++i) pts.push_back({s.dates()[i], s.values()[i]});
      prices.emplace(id, DailySeries(id, pts));
    }
    data.prices = SeriesStore(std::move(prices));
    const auto& edges = data.graph.snapshots().begin()->second.edges();
    for (int w : {1, 5, 30}) {
      std::size_t own = 0, sup = 0;
      for (const auto& ev : data.news.events()) {
        auto ok = [&](const FirmId& f) {
          const auto* rec = data.firms.find(f);
          return rec && complete(data.prices.find(f), ev.date, w) &&
                 complete(data.indices.find(rec->market), ev.date, w);
        };
        for (const auto& f : ev.mentions) own += ok(f);
        std::set<FirmId> exposed;
        for (const auto& e : edges) {
          const bool hits = std::find(ev.mentions.begin(), ev.mentions.end(), e.client) != ev.mentions.end();
          const bool mentioned = std::find(ev.mentions.begin(), ev.mentions.end(), e.supplier) != ev.mentions.end();
          if (hits && !mentioned) exposed.insert(e.supplier);
        }
        for (const auto& f : exposed) sup += ok(f);
      }
      const auto p_own = build_panel(data, Mode::Own, Polarity::Positive, w);
      const auto p_sup = build_panel(data, Mode::Supplier, Polarity::Positive, w);
      mismatches += p_own.rows.size() != 2 * own;
      mismatches += p_sup.rows.size() != 2 * sup;
      checked += 2;
    }
  }
  return {checked > 0 && mismatches == 0, fmt("%d panels checked, %d mismatches", checked, mismatches)};
}

Outcome network_counts() {
  std::mt19937_64 rng(99);
  int checked = 0, mismatches = 0;
  for (std::size_t n_edges : {0u, 10u, 100u, 1000u, 5000u, 10000u}) {
    for (int rep = 0; rep < 3; ++rep) {
      const int nodes = 10 + static_cast<int>(n_edges / (3 + rep));
      std::uniform_int_distribution<int> node(0, nodes - 1);
      std::vector<SupplyEdge> edges;
      while (edges.size() < n_edges) {
        const int a = node(rng), b = node(rng);
        if (a != b) edges.push_back({"F" + std::to_string(a), "F" + std::to_string(b)});
      }
      std::set<FirmId> filter;
      for (int i = 0; i < nodes; i += 3) filter.insert("F" + std::to_string(i));
      std::map<int, SupplyChainSnapshot> m;
      m.emplace(2003, SupplyChainSnapshot(2003, edges));
      const SupplyChainGraph g(std::move(m));
      const std::set<FirmId>* scopes[] = {nullptr, &filter};
      for (const auto* f : scopes) {
        std::set<std::pair<FirmId, FirmId>> kept;
        for (const auto& e : edges) {
          if (!f || (f->count(e.supplier) && f->count(e.client))) kept.insert({e.supplier, e.client});
        }
        std::map<FirmId, std::size_t> in, out;
        std::set<FirmId> firms = f ? *f : std::set<FirmId>{};
        for (const auto& [s, c] : kept) {
          ++out[s];
          ++in[c];
          firms.insert(s);
          firms.insert(c);
        }
        NetworkStats want{firms.size(), kept.size(), 0, 0};
        for (const auto& [x, d] : in) want.max_indegree = std::max(want.max_indegree, d);
        for (const auto& [x, d] : out) want.max_outdegree = std::max(want.max_outdegree, d);
        mismatches += !(g.network_stats(2003, f) == want);
        ++checked;
      }
    }
  }
  return {mismatches == 0, fmt("%d graphs checked, %d mismatches", checked, mismatches)};
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_all(e.path());
  }
  return out;
}

Outcome determinism() {
  const auto root = temp_dir("acceptance_determinism");
  auto pipeline = [&](const std::string& name, unsigned threads) {
    RunConfig rc;
    rc.out = root / name / "bundle";
    rc.threads = threads;
    rc.set("windows", "1,2,5,30");
    auto sim = recovery_config(7);
    sim.n_firms = 300;
    sim.edge_prob = 0.01;
    std::ostringstream log;
    cmd_simulate(rc, sim, log);
    rc.paths = bundle_paths(rc.out);
    rc.out = root / name / "run";
    rc.set("mode", "all");
    rc.set("polarity", "all");
    rc.export_panel = true;
    const int status = cmd_run(rc, log);
    return std::pair{status, tree(root / name)};
  };
  const auto a = pipeline("a", 1);
  const auto b = pipeline("b", 1);
  const auto c = pipeline("c", 8);
  const bool ok = a.first == 0 && a.second == b.second && a.second == c.second;
  return {ok, fmt("%zu files; rerun identical %s, threads 1 vs 8 identical %s", a.second.size(),
                  a.second == b.second ? "yes" : "no", a.second == c.second ? "yes" : "no")};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };

  report(1, "window arithmetic", window_arithmetic);
  const auto panels = random_panels();
  report(2, "estimator equivalence", [&] { return estimator_equivalence(panels); });
  report(3, "difference-test oracle", [&] { return difference_oracle(panels); });
  const auto t0 = Clock::now();
  std::vector<SeedFits> runs;
  std::string run_error;
  try {
    runs = recovery_runs();
  } catch (const std::exception& e) {
    run_error = e.what();
  }
  const double elapsed = seconds_since(t0);
  report(4, "direct recovery", [&] {
    if (!run_error.empty()) throw std::runtime_error(run_error);
    return direct_recovery(runs, elapsed);
  });
  report(5, "indirect recovery", [&] {
    if (!run_error.empty()) throw std::runtime_error(run_error);
    return indirect_recovery(runs, elapsed);
  });
  report(6, "size control", size_control);
  report(7, "panel counts", panel_counts);
  report(8, "network statistics", network_counts);
  report(9, "determinism", determinism);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
