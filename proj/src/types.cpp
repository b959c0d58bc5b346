#include "newsprop/types.hpp"

#include <cstdio>

#include "newsprop/csv.hpp"

namespace newsprop {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Malformed: return "malformed";
    case ErrorKind::SelfLoop: return "self-loop";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::NoSnapshot: return "no-snapshot";
    case ErrorKind::AnchorOutOfRange: return "anchor-out-of-range";
    case ErrorKind::Simplex: return "simplex";
    case ErrorKind::Empty: return "empty";
    case ErrorKind::Collinear: return "collinear";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::DegenerateVariance: return "degenerate-variance";
    case ErrorKind::DuplicateFit: return "duplicate-fit";
    case ErrorKind::BadBin: return "bad-bin";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

std::string_view to_string(Period p) { return p == Period::Pre ? "pre" : "post"; }

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Own: return "own";
    case Mode::Supplier: return "supplier";
    case Mode::Client: return "client";
  }
  return "own";
}

std::string_view to_string(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "own") return Mode::Own;
  if (s == "supplier") return Mode::Supplier;
  if (s == "client") return Mode::Client;
  return std::nullopt;
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::Positive;
  if (s == "negative") return Polarity::Negative;
  return std::nullopt;
}

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() > 10 && (s[10] == 'T' || s[10] == ' ')) s = s.substr(0, 10);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  const auto y = csv::parse_int(s.substr(0, 4));
  const auto m = csv::parse_int(s.substr(5, 2));
  const auto d = csv::parse_int(s.substr(8, 2));
  if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(*y)},
                                        std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int year_of(Date d) { return static_cast<int>(std::chrono::year_month_day{d}.year()); }

}  // namespace newsprop
