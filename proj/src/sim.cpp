#include "newsprop/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Dense>
#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "newsprop/csv.hpp"

namespace newsprop {

namespace {

using Engine = boost::random::mt19937_64;

enum StreamTag : std::uint64_t { kFirmStream = 1, kMarketStream = 2, kEdgeStream = 3, kEventStream = 4 };

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Engine stream(std::uint64_t seed, StreamTag tag, std::uint64_t id) {
  return Engine(splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(tag) << 32) | id)));
}

std::string padded(char prefix, std::size_t value, std::size_t width) {
  auto digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

std::size_t width_for(std::size_t n, std::size_t min_width) {
  return std::max(min_width, std::to_string(n).size());
}

struct SimEvent {
  std::size_t day = 0;  // calendar day offset
  TradingPosition anchor = 0;
  std::vector<std::size_t> firms;  // firms[0] is the primary mention
  double p_pos = 0.0, p_neu = 0.0, p_neg = 0.0;
  std::size_t order = 0;
};

void add_drift(std::vector<double>& drift, TradingPosition first, int len, double per_day) {
  for (int k = 0; k < len; ++k) drift[static_cast<std::size_t>(first + k)] += per_day;
}

template <typename T>
T parse_or_throw(const std::string& key, const std::string& value);

template <>
int parse_or_throw<int>(const std::string& key, const std::string& value) {
  const auto v = csv::parse_int(value);
  if (!v) throw EngineError(ErrorKind::Config, "bad integer for '" + key + "': '" + value + "'");
  return static_cast<int>(*v);
}

template <>
double parse_or_throw<double>(const std::string& key, const std::string& value) {
  const auto v = csv::parse_double(value);
  if (!v) throw EngineError(ErrorKind::Config, "bad number for '" + key + "': '" + value + "'");
  return *v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw EngineError(ErrorKind::Config, "bad boolean for '" + key + "': '" + value + "'");
}

}  // namespace

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw EngineError(ErrorKind::Config, "sim config: " + msg); };
  if (n_firms < 1 || n_sectors < 1 || n_markets < 1 || n_days < 1) fail("counts must be positive");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) fail("edge_prob must lie in [0,1]");
  if (!(co_mention_prob >= 0.0 && co_mention_prob < 1.0)) fail("co_mention_prob must lie in [0,1)");
  if (!(news_rate >= 0.0)) fail("news_rate must be >= 0");
  if (!(alpha_pos > 0.0 && alpha_neu > 0.0 && alpha_neg > 0.0)) fail("Dirichlet parameters must be > 0");
  if (!(market_vol >= 0.0 && idio_vol >= 0.0)) fail("volatilities must be >= 0");
  for (double g : {gamma_pre, gamma_post, gamma_sup, gamma_cli}) {
    if (!std::isfinite(g)) fail("effects must be finite");
  }
  if (leak_window < 1 || effect_window < 1) fail("windows must be >= 1");
  if (n_days < 4 * std::max(leak_window, effect_window)) {
    fail("impossible calendar: n_days " + std::to_string(n_days) + " < 4 * max window");
  }
  if (!parse_date(start_date)) fail("bad start_date '" + start_date + "'");
}

void SimConfig::set(const std::string& key, const std::string& value) {
  if (key == "n_firms") n_firms = parse_or_throw<int>(key, value);
  else if (key == "n_sectors") n_sectors = parse_or_throw<int>(key, value);
  else if (key == "n_markets") n_markets = parse_or_throw<int>(key, value);
  else if (key == "n_days") n_days = parse_or_throw<int>(key, value);
  else if (key == "weekend_pattern") weekend_pattern = parse_bool(key, value);
  else if (key == "start_date") start_date = value;
  else if (key == "edge_prob") edge_prob = parse_or_throw<double>(key, value);
  else if (key == "news_rate") news_rate = parse_or_throw<double>(key, value);
  else if (key == "co_mention_prob") co_mention_prob = parse_or_throw<double>(key, value);
  else if (key == "alpha_pos") alpha_pos = parse_or_throw<double>(key, value);
  else if (key == "alpha_neu") alpha_neu = parse_or_throw<double>(key, value);
  else if (key == "alpha_neg") alpha_neg = parse_or_throw<double>(key, value);
  else if (key == "gamma_pre") gamma_pre = parse_or_throw<double>(key, value);
  else if (key == "gamma_post") gamma_post = parse_or_throw<double>(key, value);
  else if (key == "gamma_sup") gamma_sup = parse_or_throw<double>(key, value);
  else if (key == "gamma_cli") gamma_cli = parse_or_throw<double>(key, value);
  else if (key == "market_vol") market_vol = parse_or_throw<double>(key, value);
  else if (key == "idio_vol") idio_vol = parse_or_throw<double>(key, value);
  else if (key == "leak_window") leak_window = parse_or_throw<int>(key, value);
  else if (key == "effect_window") effect_window = parse_or_throw<int>(key, value);
  else if (key == "seed") {
    const auto v = csv::parse_int(value);
    if (!v || *v < 0) throw EngineError(ErrorKind::Config, "bad seed '" + value + "'");
    seed = static_cast<std::uint64_t>(*v);
  } else {
    throw EngineError(ErrorKind::Config, "unknown sim config key '" + key + "'");
  }
}

std::string SimConfig::to_text() const {
  using csv::format_double;
  std::ostringstream os;
  os << "n_firms=" << n_firms << "\n"
     << "n_sectors=" << n_sectors << "\n"
     << "n_markets=" << n_markets << "\n"
     << "n_days=" << n_days << "\n"
     << "weekend_pattern=" << (weekend_pattern ? "true" : "false") << "\n"
     << "start_date=" << start_date << "\n"
     << "edge_prob=" << format_double(edge_prob) << "\n"
     << "news_rate=" << format_double(news_rate) << "\n"
     << "co_mention_prob=" << format_double(co_mention_prob) << "\n"
     << "alpha_pos=" << format_double(alpha_pos) << "\n"
     << "alpha_neu=" << format_double(alpha_neu) << "\n"
     << "alpha_neg=" << format_double(alpha_neg) << "\n"
     << "gamma_pre=" << format_double(gamma_pre) << "\n"
     << "gamma_post=" << format_double(gamma_post) << "\n"
     << "gamma_sup=" << format_double(gamma_sup) << "\n"
     << "gamma_cli=" << format_double(gamma_cli) << "\n"
     << "market_vol=" << format_double(market_vol) << "\n"
     << "idio_vol=" << format_double(idio_vol) << "\n"
     << "leak_window=" << leak_window << "\n"
     << "effect_window=" << effect_window << "\n"
     << "seed=" << seed << "\n";
  return os.str();
}

SimulationResult simulate(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto n_firms = static_cast<std::size_t>(cfg.n_firms);
  const auto n_markets = static_cast<std::size_t>(cfg.n_markets);
  const Date start = *parse_date(cfg.start_date);

  // Calendar.
  SimulationResult result;
  auto& trading = result.trading_days;
  std::vector<TradingPosition> anchor_of_day(static_cast<std::size_t>(cfg.n_days), -1);
  for (int d = 0; d < cfg.n_days; ++d) {
    const Date date = start + std::chrono::days{d};
    const std::chrono::weekday wd{date};
    if (!cfg.weekend_pattern || (wd != std::chrono::Saturday && wd != std::chrono::Sunday)) trading.push_back(date);
  }
  const auto n_trading = static_cast<TradingPosition>(trading.size());
  {
    TradingPosition next = n_trading;
    for (int d = cfg.n_days - 1; d >= 0; --d) {
      const Date date = start + std::chrono::days{d};
      if (next > 0 && trading[static_cast<std::size_t>(next - 1)] == date) --next;
      anchor_of_day[static_cast<std::size_t>(d)] = next < n_trading ? next : -1;
    }
  }
  const int max_window = std::max(cfg.leak_window, cfg.effect_window);
  const TradingPosition lo = 2 * max_window;
  const TradingPosition hi = n_trading - max_window;
  std::vector<std::size_t> candidate_days;
  for (std::size_t d = 0; d < anchor_of_day.size(); ++d) {
    const auto p = anchor_of_day[d];
    if (p >= lo && p <= hi) candidate_days.push_back(d);
  }
  if (candidate_days.empty()) {
    throw EngineError(ErrorKind::Config, "impossible calendar: no trading date leaves room for the windows");
  }

  // Firms.
  const auto firm_width = width_for(n_firms, 4);
  const auto market_width = width_for(n_markets, 2);
  const auto sector_width = width_for(static_cast<std::size_t>(cfg.n_sectors), 3);
  std::vector<FirmRecord> records(n_firms);
  std::vector<double> initial_log_price(n_firms);
  std::vector<Engine> firm_rng;
  firm_rng.reserve(n_firms);
  for (std::size_t i = 0; i < n_firms; ++i) {
    firm_rng.push_back(stream(cfg.seed, kFirmStream, i));
    auto& rng = firm_rng.back();
    boost::random::uniform_int_distribution<int> sector(0, cfg.n_sectors - 1);
    boost::random::uniform_01<double> u;
    const std::size_t m = i % n_markets;
    records[i] = FirmRecord{padded('F', i + 1, firm_width), padded('M', m + 1, market_width),
                            padded('S', static_cast<std::size_t>(sector(rng)) + 1, sector_width),
                            padded('C', m + 1, market_width)};
    initial_log_price[i] = std::log(10.0) + u(rng) * (std::log(1000.0) - std::log(10.0));
  }

  // Supply chain: one snapshot stamped with the start year.
  std::vector<SupplyEdge> edges;
  {
    auto rng = stream(cfg.seed, kEdgeStream, 0);
    boost::random::bernoulli_distribution<double> link(cfg.edge_prob);
    for (std::size_t s = 0; s < n_firms; ++s) {
      for (std::size_t c = 0; c < n_firms; ++c) {
        if (s == c) continue;
        if (link(rng)) edges.push_back({records[s].id, records[c].id});
      }
    }
  }
  const int snapshot_year = year_of(start);
  std::map<int, SupplyChainSnapshot> snaps;
  snaps.emplace(snapshot_year, SupplyChainSnapshot(snapshot_year, std::move(edges)));
  SupplyChainGraph graph(std::move(snaps));
  const auto& snap = graph.snapshot(snapshot_year);
  std::map<FirmId, std::size_t> firm_index;
  for (std::size_t i = 0; i < n_firms; ++i) firm_index.emplace(records[i].id, i);

  // Events.
  std::vector<SimEvent> events;
  {
    auto rng = stream(cfg.seed, kEventStream, 0);
    boost::random::poisson_distribution<long, double> count_dist(cfg.news_rate * static_cast<double>(n_firms));
    boost::random::uniform_int_distribution<std::size_t> pick_firm(0, n_firms - 1);
    boost::random::uniform_int_distribution<std::size_t> pick_day(0, candidate_days.size() - 1);
    boost::random::gamma_distribution<double> g_pos(cfg.alpha_pos), g_neu(cfg.alpha_neu), g_neg(cfg.alpha_neg);
    boost::random::bernoulli_distribution<double> another(cfg.co_mention_prob);
    const long n_events = cfg.news_rate > 0.0 ? count_dist(rng) : 0;
    events.reserve(static_cast<std::size_t>(n_events));
    for (long k = 0; k < n_events; ++k) {
      SimEvent ev;
      ev.order = static_cast<std::size_t>(k);
      ev.firms.push_back(pick_firm(rng));
      ev.day = candidate_days[pick_day(rng)];
      ev.anchor = anchor_of_day[ev.day];
      double a = 0.0, b = 0.0, c = 0.0;
      do {
        a = g_pos(rng);
        b = g_neu(rng);
        c = g_neg(rng);
      } while (a + b + c <= 0.0);
      const double sum = a + b + c;
      ev.p_pos = a / sum;
      ev.p_neu = b / sum;
      ev.p_neg = std::max(0.0, 1.0 - ev.p_pos - ev.p_neu);
      while (ev.firms.size() < n_firms && another(rng)) {
        const auto f = pick_firm(rng);
        if (std::find(ev.firms.begin(), ev.firms.end(), f) == ev.firms.end()) ev.firms.push_back(f);
      }
      events.push_back(std::move(ev));
    }
    std::sort(events.begin(), events.end(), [](const SimEvent& x, const SimEvent& y) {
      return std::tie(x.day, x.firms[0], x.order) < std::tie(y.day, y.firms[0], y.order);
    });
  }

  // Injected drift, in log units per trading position.
  std::vector<std::vector<double>> drift(n_firms, std::vector<double>(static_cast<std::size_t>(n_trading), 0.0));
  auto inject = [&](std::size_t firm, TradingPosition anchor, double centred, double g_leak, double g_effect) {
    if (g_leak != 0.0) {
      add_drift(drift[firm], anchor - cfg.leak_window, cfg.leak_window, g_leak / 100.0 * centred / cfg.leak_window);
    }
    if (g_effect != 0.0) {
      add_drift(drift[firm], anchor, cfg.effect_window, g_effect / 100.0 * centred / cfg.effect_window);
    }
  };
  for (const auto& ev : events) {
    const double centred = ev.p_pos - 0.5;
    std::set<std::size_t> mentioned(ev.firms.begin(), ev.firms.end());
    std::set<std::size_t> suppliers, clients;
    for (auto j : ev.firms) {
      inject(j, ev.anchor, centred, cfg.gamma_pre, cfg.gamma_post);
      for (const auto& s : snap.suppliers_of(records[j].id)) suppliers.insert(firm_index.at(s));
      for (const auto& c : snap.clients_of(records[j].id)) clients.insert(firm_index.at(c));
    }
    for (auto s : suppliers) {
      if (!mentioned.contains(s)) inject(s, ev.anchor, centred, cfg.gamma_sup, cfg.gamma_sup);
    }
    for (auto c : clients) {
      if (!mentioned.contains(c)) inject(c, ev.anchor, centred, cfg.gamma_cli, cfg.gamma_cli);
    }
  }

  // Market factors, then per-firm log prices (parallel over firms).
  std::vector<std::vector<double>> factor(n_markets, std::vector<double>(static_cast<std::size_t>(n_trading), 0.0));
  for (std::size_t m = 0; m < n_markets; ++m) {
    auto rng = stream(cfg.seed, kMarketStream, m);
    boost::random::normal_distribution<double> normal;
    for (TradingPosition t = 1; t < n_trading; ++t) factor[m][static_cast<std::size_t>(t)] = normal(rng);
  }
  std::vector<std::vector<double>> log_price(n_firms);
  auto price_firms = [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      auto& rng = firm_rng[i];
      boost::random::normal_distribution<double> normal;
      const auto& f = factor[i % n_markets];
      auto& lp = log_price[i];
      lp.assign(static_cast<std::size_t>(n_trading), 0.0);
      lp[0] = initial_log_price[i];
      for (std::size_t t = 1; t < lp.size(); ++t) {
        lp[t] = lp[t - 1] + cfg.market_vol * f[t] + cfg.idio_vol * normal(rng) + drift[i][t];
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, n_firms);
  if (workers == 1) {
    price_firms(0, n_firms);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] { price_firms(n_firms * t / workers, n_firms * (t + 1) / workers); });
    }
  }

  std::map<std::string, DailySeries> prices;
  for (std::size_t i = 0; i < n_firms; ++i) {
    std::vector<DailyPoint> pts(static_cast<std::size_t>(n_trading));
    for (std::size_t t = 0; t < pts.size(); ++t) pts[t] = {trading[t], std::exp(log_price[i][t])};
    prices.emplace(records[i].id, DailySeries(records[i].id, std::move(pts)));
  }
  std::map<std::string, DailySeries> indices;
  for (std::size_t m = 0; m < n_markets && m < n_firms; ++m) {
    std::vector<DailyPoint> pts(static_cast<std::size_t>(n_trading));
    for (std::size_t t = 0; t < pts.size(); ++t) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = m; i < n_firms; i += n_markets) {
        sum += log_price[i][t];
        ++count;
      }
      pts[t] = {trading[t], std::exp(sum / static_cast<double>(count))};
    }
    const auto id = padded('M', m + 1, market_width);
    indices.emplace(id, DailySeries(id, std::move(pts)));
  }

  std::vector<NewsEvent> news;
  news.reserve(events.size());
  const auto news_width = width_for(events.size(), 6);
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& ev = events[k];
    NewsEvent ne;
    ne.id = padded('N', k + 1, news_width);
    ne.date = start + std::chrono::days{static_cast<int>(ev.day)};
    for (auto f : ev.firms) ne.mentions.push_back(records[f].id);
    ne.p_pos = ev.p_pos;
    ne.p_neu = ev.p_neu;
    ne.p_neg = ev.p_neg;
    news.push_back(std::move(ne));
  }

  result.data.firms = FirmRegistry(std::move(records));
  result.data.prices = SeriesStore(std::move(prices));
  result.data.indices = SeriesStore(std::move(indices));
  result.data.news = NewsStore(std::move(news));
  result.data.graph = std::move(graph);
  return result;
}

DatasetPaths bundle_paths(const std::filesystem::path& dir) {
  return {dir / "firms.csv", dir / "prices.csv", dir / "indices.csv", dir / "news.csv", dir / "edges.csv"};
}

void write_bundle(const Dataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto p = bundle_paths(dir);
  csv::write_atomic(p.firms, data.firms.to_csv());
  csv::write_atomic(p.prices, data.prices.to_csv(kPriceHeader));
  csv::write_atomic(p.indices, data.indices.to_csv(kIndexHeader));
  csv::write_atomic(p.news, data.news.to_csv());
  csv::write_atomic(p.edges, data.graph.to_csv());
}

double overlap_factor(int w, int offset, int inject_len, Period period) {
  // Cumulative drift at trading position t (relative to the anchor).
  auto cumulative = [&](int t) {
    double g = 0.0;
    for (int k = 0; k < inject_len; ++k) {
      if (offset + k <= t) g += 1.0 / inject_len;
    }
    return g;
  };
  auto block_mean = [&](int first, int last) {
    double s = 0.0;
    for (int t = first; t <= last; ++t) s += cumulative(t);
    return s / (last - first + 1);
  };
  const double a = block_mean(-2 * w, -w - 1);
  const double b = block_mean(-w, -1);
  const double c = block_mean(0, w - 1);
  return period == Period::Pre ? (b - a) / w : (c - b) / w;
}

std::vector<ExpectedBetas> expected_betas(const SimConfig& cfg, int w) {
  if (w < 1) throw EngineError(ErrorKind::Config, "window must be >= 1");
  const int leak = cfg.leak_window;
  const int eff = cfg.effect_window;
  const double k_pre_leak = overlap_factor(w, -leak, leak, Period::Pre);
  const double k_pre_eff = overlap_factor(w, 0, eff, Period::Pre);
  const double k_post_leak = overlap_factor(w, -leak, leak, Period::Post);
  const double k_post_eff = overlap_factor(w, 0, eff, Period::Post);

  const double a0 = cfg.alpha_pos + cfg.alpha_neu + cfg.alpha_neg;
  const double denom = a0 * (a0 + 1.0);
  const double eq = cfg.alpha_pos / a0;

  std::vector<ExpectedBetas> out;
  for (Mode mode : {Mode::Own, Mode::Supplier, Mode::Client}) {
    double g_leak = cfg.gamma_pre, g_eff = cfg.gamma_post;
    if (mode == Mode::Supplier) g_leak = g_eff = cfg.gamma_sup;
    if (mode == Mode::Client) g_leak = g_eff = cfg.gamma_cli;
    const double b_pre = g_leak * k_pre_leak + g_eff * k_pre_eff;
    const double b_post = g_leak * k_post_leak + g_eff * k_post_eff;
    for (Polarity pol : {Polarity::Positive, Polarity::Negative}) {
      const double az = pol == Polarity::Positive ? cfg.alpha_pos : cfg.alpha_neg;
      const double ez = az / a0;
      const double ezz = az * (az + 1.0) / denom;
      const double ezq = pol == Polarity::Positive ? ezz : cfg.alpha_pos * cfg.alpha_neg / denom;

      Eigen::Matrix3d a;
      a << ezz, 0.0, ez,  //
          0.0, ezz, ez,   //
          ez, ez, 2.0;
      const Eigen::Vector3d rhs(b_pre * (ezq - 0.5 * ez), b_post * (ezq - 0.5 * ez), (b_pre + b_post) * (eq - 0.5));
      const Eigen::Vector3d sol = a.fullPivLu().solve(rhs);

      ExpectedBetas e;
      e.mode = mode;
      e.polarity = pol;
      e.w = w;
      e.injected_pre = b_pre;
      e.injected_post = b_post;
      e.beta_pre = sol(0);
      e.beta_post = sol(1);
      out.push_back(e);
    }
  }
  return out;
}

std::string expected_to_csv(const std::vector<ExpectedBetas>& rows) {
  std::string out(kExpectedHeader);
  out += '\n';
  using csv::format_double;
  for (const auto& e : rows) {
    out += std::string(to_string(e.mode)) + "," + std::string(to_string(e.polarity)) + "," + std::to_string(e.w) +
           "," + format_double(e.injected_pre) + "," + format_double(e.injected_post) + "," +
           format_double(e.beta_pre) + "," + format_double(e.beta_post) + "\n";
  }
  return out;
}

}  // namespace newsprop
