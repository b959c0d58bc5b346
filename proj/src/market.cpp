#include "newsprop/market.hpp"

#include <algorithm>
#include <cmath>

#include "newsprop/csv.hpp"

namespace newsprop {

DailySeries::DailySeries(std::string id, std::vector<DailyPoint> points) : id_(std::move(id)) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  dates_.reserve(points.size());
  values_.reserve(points.size());
  for (const auto& p : points) {
    if (!(p.value > 0.0) || !std::isfinite(p.value)) {
      throw EngineError(ErrorKind::Malformed, "non-positive value for '" + id_ + "' on " + format_date(p.date));
    }
    if (!dates_.empty() && dates_.back() == p.date) {
      throw EngineError(ErrorKind::Duplicate, "duplicate date " + format_date(p.date) + " for '" + id_ + "'");
    }
    dates_.push_back(p.date);
    values_.push_back(p.value);
  }
}

double DailySeries::block_mean(TradingPosition first, TradingPosition last) const {
  double sum = 0.0;
  for (auto i = first; i <= last; ++i) sum += values_[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(last - first + 1);
}

SeriesStore SeriesStore::load(std::istream& in, std::string_view header, const IngestOptions& opts,
                              std::vector<Rejection>* rejected) {
  std::map<std::string, std::vector<DailyPoint>> raw;
  std::map<std::string, std::map<Date, std::size_t>> seen;
  auto reject = [&](std::size_t row, ErrorKind kind, std::string msg) {
    msg = "row " + std::to_string(row) + ": " + msg;
    if (opts.strict) throw EngineError(kind, msg, row);
    if (rejected) rejected->push_back({row, kind, std::move(msg)});
  };
  csv::read_rows(in, header, [&](const auto& f, std::size_t row) {
    if (f.size() != 3) return reject(row, ErrorKind::Malformed, "expected 3 columns");
    if (f[0].empty()) return reject(row, ErrorKind::Malformed, "empty id");
    const auto date = parse_date(f[1]);
    if (!date) return reject(row, ErrorKind::Malformed, "bad date '" + std::string(f[1]) + "'");
    const auto value = csv::parse_double(f[2]);
    if (!value || *value <= 0.0) return reject(row, ErrorKind::Malformed, "bad value '" + std::string(f[2]) + "'");
    std::string id(f[0]);
    auto [it, fresh] = seen[id].emplace(*date, row);
    if (!fresh) {
      return reject(row, ErrorKind::Duplicate,
                    "duplicate (" + id + ", " + format_date(*date) + "), first seen on row " +
                        std::to_string(it->second));
    }
    raw[id].push_back({*date, *value});
  });
  std::map<std::string, DailySeries> series;
  for (auto& [id, pts] : raw) series.emplace(id, DailySeries(id, std::move(pts)));
  return SeriesStore(std::move(series));
}

SeriesStore SeriesStore::load_prices(std::istream& in, const IngestOptions& opts, std::vector<Rejection>* rejected) {
  return load(in, kPriceHeader, opts, rejected);
}

SeriesStore SeriesStore::load_indices(std::istream& in, const IngestOptions& opts, std::vector<Rejection>* rejected) {
  return load(in, kIndexHeader, opts, rejected);
}

const DailySeries* SeriesStore::find(const std::string& id) const {
  const auto it = series_.find(id);
  return it == series_.end() ? nullptr : &it->second;
}

std::string SeriesStore::to_csv(std::string_view header) const {
  std::string out(header);
  out += '\n';
  for (const auto& [id, s] : series_) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      out += id;
      out += ',';
      out += format_date(s.dates()[i]);
      out += ',';
      out += csv::format_double(s.values()[i]);
      out += '\n';
    }
  }
  return out;
}

TradingPosition anchor_position(const DailySeries& series, Date news_date) {
  const auto& dates = series.dates();
  const auto it = std::lower_bound(dates.begin(), dates.end(), news_date);
  if (it == dates.end()) {
    throw EngineError(ErrorKind::AnchorOutOfRange,
                      "no trading date on or after " + format_date(news_date) + " for '" + series.id() + "'");
  }
  return it - dates.begin();
}

std::optional<WindowBlocks> window_blocks(const DailySeries& series, Date news_date, int w) {
  const auto& dates = series.dates();
  const auto it = std::lower_bound(dates.begin(), dates.end(), news_date);
  if (it == dates.end()) return std::nullopt;
  const TradingPosition p = it - dates.begin();
  return WindowBlocks{p, p - 2 * w, p - w - 1, p - w, p - 1, p, p + w - 1};
}

std::optional<WindowChange> window_change(const DailySeries& series, Date news_date, int w, Period period) {
  if (w < 1) throw EngineError(ErrorKind::Malformed, "window must be >= 1");
  const auto blocks = window_blocks(series, news_date, w);
  if (!blocks) return std::nullopt;
  const auto& k = *blocks;
  const auto n = static_cast<TradingPosition>(series.size());

  // pre needs A and B, post needs B and C.
  const TradingPosition first = period == Period::Pre ? k.a_first : k.b_first;
  const TradingPosition last = period == Period::Pre ? k.b_last : k.c_last;
  if (first < 0 || last >= n) return std::nullopt;

  const double mean_b = series.block_mean(k.b_first, k.b_last);
  const double value = period == Period::Pre
                           ? (std::log(mean_b) - std::log(series.block_mean(k.a_first, k.a_last))) / w * 100.0
                           : (std::log(series.block_mean(k.c_first, k.c_last)) - std::log(mean_b)) / w * 100.0;

  WindowChange out;
  out.value = value;
  out.period = period;
  out.w = w;
  out.anchor = series.dates()[static_cast<std::size_t>(k.anchor)];
  out.anchor_pos = k.anchor;
  out.anchor_shifted = out.anchor != news_date;
  return out;
}

std::optional<double> market_control(const IndexSeries& index, Date news_date, int w, Period period) {
  const auto c = window_change(index, news_date, w, period);
  if (!c) return std::nullopt;
  return c->value;
}

}  // namespace newsprop
