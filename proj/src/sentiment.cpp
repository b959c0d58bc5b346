#include "newsprop/sentiment.hpp"

#include <algorithm>
#include <cmath>

#include "newsprop/csv.hpp"

namespace newsprop {

namespace {

void renormalise(NewsEvent& e) {
  const double sum = e.p_pos + e.p_neu + e.p_neg;
  e.p_pos /= sum;
  e.p_neu /= sum;
  e.p_neg = std::max(0.0, 1.0 - e.p_pos - e.p_neu);
}

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

bool NewsEvent::mentions_firm(const FirmId& firm) const {
  return std::binary_search(mentions.begin(), mentions.end(), firm);
}

NewsStore::NewsStore(std::vector<NewsEvent> events) {
  for (auto& e : events) {
    if (e.mentions.empty()) throw EngineError(ErrorKind::Empty, "news '" + e.id + "' mentions no firm");
    std::sort(e.mentions.begin(), e.mentions.end());
    if (std::adjacent_find(e.mentions.begin(), e.mentions.end()) != e.mentions.end()) {
      throw EngineError(ErrorKind::Duplicate, "news '" + e.id + "' repeats a firm");
    }
    if (!in_unit(e.p_pos) || !in_unit(e.p_neu) || !in_unit(e.p_neg) ||
        std::abs(e.p_pos + e.p_neu + e.p_neg - 1.0) > kSimplexTolerance) {
      throw EngineError(ErrorKind::Simplex, "news '" + e.id + "' is off the probability simplex");
    }
    renormalise(e);
  }
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return std::tie(a.date, a.id) < std::tie(b.date, b.id); });
  events_ = std::move(events);
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (!by_id_.emplace(events_[i].id, i).second) {
      throw EngineError(ErrorKind::Duplicate, "duplicate news id '" + events_[i].id + "'");
    }
    for (const auto& f : events_[i].mentions) by_firm_[f].push_back(i);
  }
}

NewsStore NewsStore::load(std::istream& in, const IngestOptions& opts, std::vector<Rejection>* rejected) {
  struct Pending {
    NewsEvent event;
    double raw[3];
  };
  std::map<NewsId, Pending> pending;
  auto reject = [&](std::size_t row, ErrorKind kind, std::string msg) {
    msg = "news row " + std::to_string(row) + ": " + msg;
    if (opts.strict) throw EngineError(kind, msg, row);
    if (rejected) rejected->push_back({row, kind, std::move(msg)});
  };
  csv::read_rows(in, kNewsHeader, [&](const auto& f, std::size_t row) {
    if (f.size() != 6) return reject(row, ErrorKind::Malformed, "expected 6 columns");
    if (f[0].empty()) return reject(row, ErrorKind::Malformed, "empty news id");
    const auto date = parse_date(f[1]);
    if (!date) return reject(row, ErrorKind::Malformed, "bad date '" + std::string(f[1]) + "'");
    if (f[2].empty()) return reject(row, ErrorKind::Empty, "empty firm id (no mentioned firm)");
    double p[3];
    for (int k = 0; k < 3; ++k) {
      const auto v = csv::parse_double(f[3 + k]);
      if (!v || !in_unit(*v)) return reject(row, ErrorKind::Simplex, "probability '" + std::string(f[3 + k]) + "' not in [0,1]");
      p[k] = *v;
    }
    const double sum = p[0] + p[1] + p[2];
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
      return reject(row, ErrorKind::Simplex, "probabilities sum to " + csv::format_double(sum));
    }
    const NewsId id(f[0]);
    FirmId firm(f[2]);
    auto it = pending.find(id);
    if (it == pending.end()) {
      Pending fresh;
      fresh.event.id = id;
      fresh.event.date = *date;
      fresh.event.p_pos = p[0];
      fresh.event.p_neu = p[1];
      fresh.event.p_neg = p[2];
      std::copy(p, p + 3, fresh.raw);
      fresh.event.mentions.push_back(std::move(firm));
      pending.emplace(id, std::move(fresh));
      return;
    }
    auto& ev = it->second;
    if (ev.event.date != *date) return reject(row, ErrorKind::Malformed, "date differs from earlier rows of '" + id + "'");
    if (!std::equal(p, p + 3, ev.raw)) {
      return reject(row, ErrorKind::Malformed, "probabilities differ from earlier rows of '" + id + "'");
    }
    if (std::find(ev.event.mentions.begin(), ev.event.mentions.end(), firm) != ev.event.mentions.end()) {
      return reject(row, ErrorKind::Duplicate, "firm '" + firm + "' repeated in '" + id + "'");
    }
    ev.event.mentions.push_back(std::move(firm));
  });
  std::vector<NewsEvent> events;
  events.reserve(pending.size());
  for (auto& [id, p] : pending) events.push_back(std::move(p.event));
  return NewsStore(std::move(events));
}

const NewsEvent* NewsStore::find(const NewsId& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &events_[it->second];
}

const std::vector<std::size_t>& NewsStore::events_for(const FirmId& firm) const {
  static const std::vector<std::size_t> none;
  const auto it = by_firm_.find(firm);
  return it == by_firm_.end() ? none : it->second;
}

std::string NewsStore::to_csv() const {
  std::string out(kNewsHeader);
  out += '\n';
  for (const auto& e : events_) {
    const auto tail = "," + csv::format_double(e.p_pos) + "," + csv::format_double(e.p_neu) + "," +
                      csv::format_double(e.p_neg) + "\n";
    const auto head = e.id + "," + format_date(e.date) + ",";
    for (const auto& f : e.mentions) out += head + f + tail;
  }
  return out;
}

MentionHistogram mention_histogram(const NewsStore& store, const std::set<FirmId>* registry) {
  MentionHistogram h;
  if (registry) {
    for (const auto& f : *registry) h.articles_per_firm[f] = 0;
  }
  for (const auto& e : store.events()) {
    ++h.mentions_per_article[e.mentions.size()];
    for (const auto& f : e.mentions) ++h.articles_per_firm[f];
  }
  return h;
}

}  // namespace newsprop
