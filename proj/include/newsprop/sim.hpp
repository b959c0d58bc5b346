#pragma once

// Synthetic market generator with injected, analytically known news effects.
//
// Log-price recursion per firm i in market m, on trading position t:
//
//   ln P[i,t] = ln P[i,t-1] + market_vol * f[m,t] + idio_vol * e[i,t] + drift[i,t]
//
// with f, e standard normal. An event with positiveness q anchored at
// trading position p adds, to each mentioned firm,
//
//   gamma_pre  * (q - 0.5) / leak_window    on positions p-leak_window .. p-1
//   gamma_post * (q - 0.5) / effect_window  on positions p .. p+effect_window-1
//
// (gammas are in percent, so drift is gamma / 100 in log units). The event's
// suppliers (clients), excluding firms it mentions, receive the same with
// gamma_sup (gamma_cli) in both slots. Index values are the exponentiated
// within-market mean log price.
//
// Random streams: every stream is a boost mt19937_64 seeded with
// splitmix64(seed ^ splitmix64(tag << 32 | id)). Tags: 1 = firm (sector,
// initial price, then one idiosyncratic normal per trading position after
// the first), 2 = market (one factor normal per trading position after the
// first), 3 = supply edges, 4 = events. Per-firm streams make parallel
// generation thread-count independent.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "newsprop/dataset.hpp"
#include "newsprop/types.hpp"

namespace newsprop {

struct SimConfig {
  int n_firms = 200;
  int n_sectors = 10;
  int n_markets = 2;
  int n_days = 730;              // calendar days
  bool weekend_pattern = true;   // 5 trading days, 2 days off
  std::string start_date = "2010-01-04";
  double edge_prob = 0.01;       // per ordered firm pair
  double news_rate = 5.0;        // expected events per firm over the horizon
  double co_mention_prob = 0.0;  // chance of each additional mentioned firm
  // Dirichlet parameters of (p_pos, p_neu, p_neg).
  double alpha_pos = 2.0;
  double alpha_neu = 1.0;
  double alpha_neg = 1.0;
  double gamma_pre = 0.0;
  double gamma_post = 0.0;
  double gamma_sup = 0.0;
  double gamma_cli = 0.0;
  double market_vol = 0.01;
  double idio_vol = 0.01;
  int leak_window = 1;
  int effect_window = 1;
  std::uint64_t seed = 1;

  /// Throws EngineError(Config) on a violated invariant, including a calendar
  /// too short for the injection windows.
  void validate() const;

  /// Applies `key=value` pairs; unknown keys or unparsable values throw
  /// EngineError(Config).
  void set(const std::string& key, const std::string& value);

  /// `key=value` lines in declaration order; `set` accepts every line.
  std::string to_text() const;
};

struct SimulationResult {
  Dataset data;
  std::vector<Date> trading_days;
};

/// Deterministic in (config, seed); `threads` only changes wall time.
SimulationResult simulate(const SimConfig& config, unsigned threads = 1);

/// Writes firms.csv, prices.csv, indices.csv, news.csv and edges.csv into
/// `dir` (created if needed).
void write_bundle(const Dataset& data, const std::filesystem::path& dir);

DatasetPaths bundle_paths(const std::filesystem::path& dir);

/// Contribution of a unit total drift, spread evenly over `inject_len`
/// trading positions starting at `offset` relative to the anchor, to the
/// windowed change of width `w`, to first order in the drift. Found by
/// enumerating the cumulative drift at every block position.
double overlap_factor(int w, int offset, int inject_len, Period period);

struct ExpectedBetas {
  Mode mode = Mode::Own;
  Polarity polarity = Polarity::Positive;
  int w = 1;
  // Injected per-unit-centred-positiveness effect on the windowed changes.
  double injected_pre = 0.0;
  double injected_post = 0.0;
  // Population least-squares coefficients of the absorbed-sector regression
  // given the injection and the sentiment law.
  double beta_pre = 0.0;
  double beta_post = 0.0;
};

/// Analytic expectations for every mode and polarity at window `w`.
///
/// The injected driver is q - 0.5 with q = p_pos, while the regression has no
/// period main effects, so the period-specific level b_T * (E[q] - 0.5) loads
/// onto the interactions. With z the regressor (p_pos or p_neg) the
/// coefficients (beta_pre, beta_post, c) solve the population normal
/// equations
///
///   beta_pre  E[z^2] + c E[z] = b_pre  (E[zq] - E[z]/2)
///   beta_post E[z^2] + c E[z] = b_post (E[zq] - E[z]/2)
///   (beta_pre + beta_post) E[z] + 2c = (b_pre + b_post)(E[q] - 1/2)
///
/// using Dirichlet moments. The market control is treated as orthogonal to
/// the news driver (own-firm contamination of the index is O(1/firms per
/// market)).
std::vector<ExpectedBetas> expected_betas(const SimConfig& config, int w);

inline constexpr std::string_view kExpectedHeader = "mode,polarity,w,injected_pre,injected_post,beta_pre,beta_post";

std::string expected_to_csv(const std::vector<ExpectedBetas>& rows);

}  // namespace newsprop
