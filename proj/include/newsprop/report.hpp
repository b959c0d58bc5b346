#pragma once

// Presentation data: effect-plot rows, coefficient tables and histograms.
// Everything here is plain text for an external plotter.

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "newsprop/regress.hpp"

namespace newsprop {

/// Half-width multiplier of the plotted 95% interval.
inline constexpr double kCiZ = 1.96;

struct EffectPlotRow {
  Mode mode = Mode::Own;
  Polarity polarity = Polarity::Positive;
  int w = 1;
  int x = 0;  // -w for the pre estimate, +w for the post estimate
  double beta = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Two rows per fit, ordered by (mode, polarity, x). Throws
/// EngineError(DuplicateFit) if two fits share (mode, polarity, w).
std::vector<EffectPlotRow> effect_plot_data(std::span<const FitResult> fits);

inline constexpr std::string_view kEffectsHeader = "mode,polarity,w,x,beta,ci_lo,ci_hi";

std::string effects_to_csv(std::span<const EffectPlotRow> rows);

/// Three significant digits in the "3.23×10^-1" style.
std::string format_sci3(double v);

/// One block per (mode, polarity), one column per window, rows beta_pre (se),
/// beta_post (se), diff, p value, n_obs.
std::string coefficient_table(std::span<const FitResult> fits);

struct IntegerCounts {};
struct FixedWidth {
  double width = 1.0;
};
using BinRule = std::variant<IntegerCounts, FixedWidth>;

/// (bin, count) pairs over contiguous bins from the minimum to the maximum
/// value. Integer bins are labelled by their value (values are rounded to the
/// nearest integer); fixed-width bins by their lower edge k * width. Throws
/// EngineError(BadBin) for a non-positive width and EngineError(Empty) for
/// empty input with fixed-width bins.
std::vector<std::pair<double, std::size_t>> histogram(std::span<const double> values, const BinRule& rule);

inline constexpr std::string_view kHistHeader = "bin,count";

std::string histogram_to_csv(std::span<const std::pair<double, std::size_t>> bins);

}  // namespace newsprop
