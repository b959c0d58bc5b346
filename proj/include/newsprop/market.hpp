#pragma once

// Daily close series on per-series trading calendars, and the windowed
// pre/post percentage changes built from them.
//
// Trading positions are indices into a series' date list; weekends, holidays
// and missing quotes have no entry. For an anchor position p and window w the
// three blocks are
//
//   A = [p-2w, p-w-1]   B = [p-w, p-1]   C = [p, p+w-1]
//
// and the changes, in percent per day, are
//
//   pre  = (ln mean(B) - ln mean(A)) / w * 100
//   post = (ln mean(C) - ln mean(B)) / w * 100
//
// where mean() is the arithmetic mean of closes in the block.

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "newsprop/types.hpp"

namespace newsprop {

struct DailyPoint {
  Date date;
  double value = 0.0;
};

/// Strictly date-ascending positive series for one firm or market index.
class DailySeries {
 public:
  DailySeries() = default;
  /// Sorts `points`. Throws EngineError(Duplicate) on a repeated date and
  /// EngineError(Malformed) on a non-positive or non-finite value.
  DailySeries(std::string id, std::vector<DailyPoint> points);

  const std::string& id() const noexcept { return id_; }
  std::size_t size() const noexcept { return dates_.size(); }
  bool empty() const noexcept { return dates_.empty(); }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Arithmetic mean of values at positions [first, last]; the caller
  /// guarantees the range lies inside the series.
  double block_mean(TradingPosition first, TradingPosition last) const;

 private:
  std::string id_;
  std::vector<Date> dates_;
  std::vector<double> values_;
};

using PriceSeries = DailySeries;
using IndexSeries = DailySeries;

/// Series keyed by firm id (prices) or market id (indices).
class SeriesStore {
 public:
  SeriesStore() = default;
  explicit SeriesStore(std::map<std::string, DailySeries> series) : series_(std::move(series)) {}

  /// Reads `<id_column>,date,<value_column>` rows in any order. Rows with a
  /// bad date, a non-positive value, or a repeated (id, date) are rejected.
  static SeriesStore load(std::istream& in, std::string_view header, const IngestOptions& opts = {},
                          std::vector<Rejection>* rejected = nullptr);
  static SeriesStore load_prices(std::istream& in, const IngestOptions& opts = {},
                                 std::vector<Rejection>* rejected = nullptr);
  static SeriesStore load_indices(std::istream& in, const IngestOptions& opts = {},
                                  std::vector<Rejection>* rejected = nullptr);

  const DailySeries* find(const std::string& id) const;
  const std::map<std::string, DailySeries>& all() const noexcept { return series_; }

  std::string to_csv(std::string_view header) const;

 private:
  std::map<std::string, DailySeries> series_;
};

inline constexpr std::string_view kPriceHeader = "firm_id,date,close";
inline constexpr std::string_view kIndexHeader = "market_id,date,value";

struct WindowChange {
  double value = 0.0;  // percent per day
  Period period = Period::Pre;
  int w = 1;
  Date anchor;                  // trading date the blocks are anchored on
  TradingPosition anchor_pos = 0;
  bool anchor_shifted = false;  // news date was not a trading date
};

/// Position of `news_date` if it is a trading date, else of the first trading
/// date after it. Throws EngineError(AnchorOutOfRange) when none exists.
TradingPosition anchor_position(const DailySeries& series, Date news_date);

/// Inclusive trading-position ranges of the three blocks.
struct WindowBlocks {
  TradingPosition anchor = 0;
  TradingPosition a_first = 0, a_last = 0;
  TradingPosition b_first = 0, b_last = 0;
  TradingPosition c_first = 0, c_last = 0;
};

/// Blocks for anchor `news_date` and window `w`, whether or not they fit in
/// the series; nullopt only when no anchor exists.
std::optional<WindowBlocks> window_blocks(const DailySeries& series, Date news_date, int w);

/// Windowed change around `news_date`; nullopt if any block needed for
/// `period` falls outside the series or no anchor exists. Throws
/// EngineError(Malformed) for w < 1.
std::optional<WindowChange> window_change(const DailySeries& series, Date news_date, int w, Period period);

/// Same computation on a market index, anchored on the index's own calendar.
std::optional<double> market_control(const IndexSeries& index, Date news_date, int w, Period period);

}  // namespace newsprop
