#include "newsprop/panel.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include "newsprop/csv.hpp"

namespace newsprop {

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::UnknownFirm: return "unknown-firm";
    case DropReason::MissingSectorOrMarket: return "missing-sector-or-market";
    case DropReason::PriceWindow: return "price-window";
    case DropReason::IndexWindow: return "index-window";
    case DropReason::NoSnapshot: return "no-snapshot";
  }
  return "unknown";
}

namespace {

struct Chunk {
  std::vector<Observation> rows;
  std::vector<DropRecord> drops;
};

std::vector<FirmId> exposed_firms(const Dataset& data, const NewsEvent& ev, Mode mode, bool& no_snapshot) {
  no_snapshot = false;
  if (mode == Mode::Own) return ev.mentions;
  const auto* snap = data.graph.snapshot_at_or_before(year_of(ev.date));
  if (!snap) {
    no_snapshot = true;
    return {};
  }
  std::set<FirmId> out;
  for (const auto& j : ev.mentions) {
    const auto& linked = mode == Mode::Supplier ? snap->suppliers_of(j) : snap->clients_of(j);
    for (const auto& i : linked) {
      if (!ev.mentions_firm(i)) out.insert(i);
    }
  }
  return {out.begin(), out.end()};
}

void process_pair(const Dataset& data, const NewsEvent& ev, const FirmId& firm, Polarity polarity, int w,
                  Chunk& out) {
  auto drop = [&](DropReason r) { out.drops.push_back({ev.id, firm, r}); };
  const auto* rec = data.firms.find(firm);
  if (!rec) return drop(DropReason::UnknownFirm);
  if (rec->sector.empty() || rec->market.empty()) return drop(DropReason::MissingSectorOrMarket);

  const auto* prices = data.prices.find(firm);
  if (!prices) return drop(DropReason::PriceWindow);
  const auto pre = window_change(*prices, ev.date, w, Period::Pre);
  const auto post = window_change(*prices, ev.date, w, Period::Post);
  if (!pre || !post) return drop(DropReason::PriceWindow);

  const auto* index = data.indices.find(rec->market);
  if (!index) return drop(DropReason::IndexWindow);
  const auto x_pre = market_control(*index, ev.date, w, Period::Pre);
  const auto x_post = market_control(*index, ev.date, w, Period::Post);
  if (!x_pre || !x_post) return drop(DropReason::IndexWindow);

  const double news_value = ev.value(polarity);
  for (const auto& [change, x] : {std::pair{*pre, *x_pre}, std::pair{*post, *x_post}}) {
    Observation o;
    o.firm_id = firm;
    o.news_id = ev.id;
    o.w = w;
    o.period = change.period;
    o.y = change.value;
    o.news_value = news_value;
    o.market_x = x;
    o.sector = rec->sector;
    o.market = rec->market;
    o.anchor = change.anchor;
    o.anchor_shifted = change.anchor_shifted;
    out.rows.push_back(std::move(o));
  }
}

void process_events(const Dataset& data, Mode mode, Polarity polarity, int w, std::size_t first, std::size_t last,
                    Chunk& out) {
  const auto& events = data.news.events();
  for (std::size_t k = first; k < last; ++k) {
    const auto& ev = events[k];
    bool no_snapshot = false;
    const auto firms = exposed_firms(data, ev, mode, no_snapshot);
    if (no_snapshot) {
      out.drops.push_back({ev.id, FirmId{}, DropReason::NoSnapshot});
      continue;
    }
    for (const auto& f : firms) process_pair(data, ev, f, polarity, w, out);
  }
}

}  // namespace

Panel build_panel(const Dataset& data, Mode mode, Polarity polarity, int w, unsigned threads) {
  if (w < 1) throw EngineError(ErrorKind::Malformed, "window must be >= 1");
  const std::size_t n = data.news.events().size();
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  std::vector<Chunk> chunks(workers);
  if (workers == 1) {
    process_events(data, mode, polarity, w, 0, n, chunks[0]);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        process_events(data, mode, polarity, w, n * t / workers, n * (t + 1) / workers, chunks[t]);
      });
    }
  }

  Panel p;
  p.mode = mode;
  p.polarity = polarity;
  p.w = w;
  for (auto& c : chunks) {
    std::move(c.rows.begin(), c.rows.end(), std::back_inserter(p.rows));
    std::move(c.drops.begin(), c.drops.end(), std::back_inserter(p.drops));
  }
  std::sort(p.rows.begin(), p.rows.end(), [](const Observation& a, const Observation& b) {
    return std::tie(a.news_id, a.firm_id, a.period) < std::tie(b.news_id, b.firm_id, b.period);
  });
  std::sort(p.drops.begin(), p.drops.end());
  return p;
}

PanelSummary panel_summary(const Panel& panel) {
  PanelSummary s;
  s.n_obs = panel.rows.size();
  std::set<NewsId> events;
  std::set<FirmId> firms;
  for (const auto& o : panel.rows) {
    events.insert(o.news_id);
    firms.insert(o.firm_id);
  }
  s.n_events = events.size();
  s.n_firms = firms.size();
  for (const auto& d : panel.drops) ++s.drop_counts[d.reason];
  return s;
}

std::string panel_to_csv(const Panel& panel) {
  std::string out(kPanelHeader);
  out += '\n';
  for (const auto& o : panel.rows) {
    out += o.firm_id + "," + o.news_id + "," + std::to_string(o.w) + "," + std::string(to_string(o.period)) + "," +
           csv::format_double(o.y) + "," + csv::format_double(o.news_value) + "," + csv::format_double(o.market_x) +
           "," + o.sector + "," + o.market + "\n";
  }
  return out;
}

}  // namespace newsprop
