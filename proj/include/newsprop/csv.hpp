#pragma once

// Minimal comma-separated I/O used by every loader and exporter. Fields are
// plain tokens: no quoting, no embedded commas.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newsprop/types.hpp"

namespace newsprop::csv {

std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);

/// Reads the header line and checks it equals `expected_header` (after
/// trimming whitespace and a UTF-8 BOM). Then calls `on_row(fields, row)` for
/// each non-blank data line; `row` is 1-based over data lines.
/// Throws EngineError(Malformed) on a header mismatch.
void read_rows(std::istream& in, std::string_view expected_header,
               const std::function<void(const std::vector<std::string_view>&, std::size_t)>& on_row);

/// Opens `path` for reading or throws EngineError(Io).
std::ifstream open_input(const std::filesystem::path& path);

/// Writes `contents` to `path` via a temporary sibling and a rename, so a
/// reader never observes a truncated file.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace newsprop::csv
