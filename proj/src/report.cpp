#include "newsprop/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "newsprop/csv.hpp"

namespace newsprop {

namespace {

// Display width of UTF-8 text: counts code points, not bytes.
std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80 ? 1 : 0;
  return n;
}

std::string pad_right(std::string s, std::size_t width) {
  const auto w = display_width(s);
  if (w < width) s.append(width - w, ' ');
  return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
  const auto w = display_width(s);
  return w < width ? std::string(width - w, ' ') + s : s;
}

}  // namespace

std::vector<EffectPlotRow> effect_plot_data(std::span<const FitResult> fits) {
  std::set<std::tuple<Mode, Polarity, int>> seen;
  std::vector<EffectPlotRow> rows;
  rows.reserve(fits.size() * 2);
  for (const auto& f : fits) {
    if (!seen.emplace(f.mode, f.polarity, f.w).second) {
      throw EngineError(ErrorKind::DuplicateFit, "duplicate fit for (" + std::string(to_string(f.mode)) + ", " +
                                                     std::string(to_string(f.polarity)) + ", w=" +
                                                     std::to_string(f.w) + ")");
    }
    const double h_pre = kCiZ * f.se_pre;
    const double h_post = kCiZ * f.se_post;
    rows.push_back({f.mode, f.polarity, f.w, -f.w, f.beta_pre, f.beta_pre - h_pre, f.beta_pre + h_pre});
    rows.push_back({f.mode, f.polarity, f.w, f.w, f.beta_post, f.beta_post - h_post, f.beta_post + h_post});
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.mode, a.polarity, a.x) < std::tie(b.mode, b.polarity, b.x);
  });
  return rows;
}

std::string effects_to_csv(std::span<const EffectPlotRow> rows) {
  std::string out(kEffectsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::string(to_string(r.mode)) + "," + std::string(to_string(r.polarity)) + "," + std::to_string(r.w) +
           "," + std::to_string(r.x) + "," + csv::format_double(r.beta) + "," + csv::format_double(r.ci_lo) + "," +
           csv::format_double(r.ci_hi) + "\n";
  }
  return out;
}

std::string format_sci3(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v == 0.0 ? 0.0 : v);
  const std::string_view s(buf);
  const auto e = s.find('e');
  const auto mantissa = s.substr(0, e);
  auto exp_text = s.substr(e + 1);
  if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
  const auto exponent = csv::parse_int(exp_text);
  return std::string(mantissa) + "×10^" + std::to_string(exponent.value_or(0));
}

std::string coefficient_table(std::span<const FitResult> fits) {
  std::map<std::pair<Mode, Polarity>, std::vector<const FitResult*>> blocks;
  for (const auto& f : fits) blocks[{f.mode, f.polarity}].push_back(&f);

  std::string out;
  for (auto& [key, cols] : blocks) {
    std::stable_sort(cols.begin(), cols.end(), [](const auto* a, const auto* b) { return a->w < b->w; });
    const std::vector<std::string> labels = {"", "beta_pre", "beta_post", "diff", "p value", "n_obs"};
    std::vector<std::vector<std::string>> cells(labels.size());
    for (const auto* f : cols) {
      cells[0].push_back("w=" + std::to_string(f->w));
      cells[1].push_back(format_sci3(f->beta_pre) + " (" + format_sci3(f->se_pre) + ")");
      cells[2].push_back(format_sci3(f->beta_post) + " (" + format_sci3(f->se_post) + ")");
      cells[3].push_back(format_sci3(f->beta_post - f->beta_pre));
      cells[4].push_back(format_sci3(f->diff_p));
      cells[5].push_back(std::to_string(f->n_obs));
    }
    std::size_t label_width = 0;
    for (const auto& l : labels) label_width = std::max(label_width, display_width(l));
    std::vector<std::size_t> widths(cols.size(), 0);
    for (const auto& row : cells) {
      for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], display_width(row[c]));
    }
    out += "mode=" + std::string(to_string(key.first)) + " polarity=" + std::string(to_string(key.second)) + "\n";
    for (std::size_t r = 0; r < labels.size(); ++r) {
      std::string line = pad_right(labels[r], label_width);
      for (std::size_t c = 0; c < cells[r].size(); ++c) line += "  " + pad_left(cells[r][c], widths[c]);
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    }
    out += "\n";
  }
  return out;
}

std::vector<std::pair<double, std::size_t>> histogram(std::span<const double> values, const BinRule& rule) {
  std::vector<std::pair<double, std::size_t>> out;
  if (const auto* fw = std::get_if<FixedWidth>(&rule)) {
    if (!(fw->width > 0.0) || !std::isfinite(fw->width)) {
      throw EngineError(ErrorKind::BadBin, "bin width must be positive");
    }
    if (values.empty()) throw EngineError(ErrorKind::Empty, "fixed-width histogram of no values");
    // The tiny nudge keeps exact multiples such as 0.3 / 0.1 in their own bin.
    auto bin_of = [&](double v) { return static_cast<long long>(std::floor(v / fw->width + 1e-9)); };
    long long lo = bin_of(values[0]), hi = lo;
    for (double v : values) {
      lo = std::min(lo, bin_of(v));
      hi = std::max(hi, bin_of(v));
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
    for (double v : values) ++counts[static_cast<std::size_t>(bin_of(v) - lo)];
    for (std::size_t k = 0; k < counts.size(); ++k) {
      out.emplace_back(static_cast<double>(lo + static_cast<long long>(k)) * fw->width, counts[k]);
    }
    return out;
  }
  if (values.empty()) return out;
  auto bin_of = [](double v) { return static_cast<long long>(std::llround(v)); };
  long long lo = bin_of(values[0]), hi = lo;
  for (double v : values) {
    lo = std::min(lo, bin_of(v));
    hi = std::max(hi, bin_of(v));
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  for (double v : values) ++counts[static_cast<std::size_t>(bin_of(v) - lo)];
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out.emplace_back(static_cast<double>(lo + static_cast<long long>(k)), counts[k]);
  }
  return out;
}

std::string histogram_to_csv(std::span<const std::pair<double, std::size_t>> bins) {
  std::string out(kHistHeader);
  out += '\n';
  char label[32];
  for (const auto& [bin, count] : bins) {
    // %.12g hides the k * width representation error (0.30000000000000004).
    std::snprintf(label, sizeof(label), "%.12g", bin == 0.0 ? 0.0 : bin);
    out += std::string(label) + "," + std::to_string(count) + "\n";
  }
  return out;
}

}  // namespace newsprop
