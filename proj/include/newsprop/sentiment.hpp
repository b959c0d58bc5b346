#pragma once

// News events with their classifier sentiment triple. Sentiment is ingested
// as data; nothing here runs a model.

#include <istream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "newsprop/types.hpp"

namespace newsprop {

inline constexpr std::string_view kNewsHeader = "news_id,date,firm_id,p_pos,p_neu,p_neg";

/// Accepted deviation of p_pos + p_neu + p_neg from 1 before renormalising.
inline constexpr double kSimplexTolerance = 1e-3;

struct NewsEvent {
  NewsId id;
  Date date;
  std::vector<FirmId> mentions;  // sorted, unique, non-empty
  double p_pos = 0.0;
  double p_neu = 0.0;
  double p_neg = 0.0;

  double value(Polarity polarity) const { return polarity == Polarity::Positive ? p_pos : p_neg; }
  bool mentions_firm(const FirmId& firm) const;
};

class NewsStore {
 public:
  NewsStore() = default;
  /// Validates and renormalises each event. Throws EngineError on a simplex
  /// violation, empty mentions, or a duplicate news id.
  explicit NewsStore(std::vector<NewsEvent> events);

  /// Reads one row per (article, mentioned firm). Rejected rows: malformed
  /// fields, probabilities outside [0,1] or off the simplex, a firm repeated
  /// within an article, or probabilities/date that disagree with the
  /// article's first row.
  static NewsStore load(std::istream& in, const IngestOptions& opts = {},
                        std::vector<Rejection>* rejected = nullptr);

  /// Events ordered by (date, id).
  const std::vector<NewsEvent>& events() const noexcept { return events_; }
  const NewsEvent* find(const NewsId& id) const;
  /// Indices into events() for articles mentioning `firm`, date-ascending.
  const std::vector<std::size_t>& events_for(const FirmId& firm) const;
  const std::map<FirmId, std::vector<std::size_t>>& firm_index() const noexcept { return by_firm_; }

  std::string to_csv() const;

 private:
  std::vector<NewsEvent> events_;
  std::unordered_map<NewsId, std::size_t> by_id_;
  std::map<FirmId, std::vector<std::size_t>> by_firm_;
};

struct MentionHistogram {
  std::map<std::size_t, std::size_t> mentions_per_article;  // mention count -> articles
  std::map<FirmId, std::size_t> articles_per_firm;
};

/// Exact counts. When `registry` is given, registry firms never mentioned
/// appear in articles_per_firm with count 0.
MentionHistogram mention_histogram(const NewsStore& store, const std::set<FirmId>* registry = nullptr);

}  // namespace newsprop
