#pragma once

// Shared vocabulary types for the news-propagation event-study engine.

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace newsprop {

using FirmId = std::string;
using MarketId = std::string;
using SectorCode = std::string;
using NewsId = std::string;

/// Calendar date at day resolution.
using Date = std::chrono::sys_days;

/// Index into a series' list of trading dates.
using TradingPosition = std::ptrdiff_t;

enum class ErrorKind {
  Io,
  Malformed,
  SelfLoop,
  Duplicate,
  NoSnapshot,
  AnchorOutOfRange,
  Simplex,
  Empty,
  Collinear,
  InsufficientData,
  DegenerateVariance,
  DuplicateFit,
  BadBin,
  Config,
};

std::string_view to_string(ErrorKind kind);

/// All engine failures surface as this exception; `kind()` is stable for callers
/// that branch on the failure class, `row()` is the 1-based data row when the
/// error comes from a file.
class EngineError : public std::runtime_error {
 public:
  EngineError(ErrorKind kind, const std::string& what, std::size_t row = 0)
      : std::runtime_error(what), kind_(kind), row_(row) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }

 private:
  ErrorKind kind_;
  std::size_t row_;
};

/// One row a loader refused; `row` is the 1-based data row.
struct Rejection {
  std::size_t row = 0;
  ErrorKind kind = ErrorKind::Malformed;
  std::string message;
};

/// Loader policy. In strict mode the first rejected row throws; otherwise
/// rejected rows are skipped and reported back to the caller.
struct IngestOptions {
  bool strict = false;
};

enum class Period { Pre, Post };
enum class Mode { Own, Supplier, Client };
enum class Polarity { Positive, Negative };

std::string_view to_string(Period p);
std::string_view to_string(Mode m);
std::string_view to_string(Polarity p);

std::optional<Mode> parse_mode(std::string_view s);
std::optional<Polarity> parse_polarity(std::string_view s);

/// Parses YYYY-MM-DD. A trailing time part ("T..." or " ...") is truncated.
std::optional<Date> parse_date(std::string_view s);
std::string format_date(Date d);

int year_of(Date d);

}  // namespace newsprop
