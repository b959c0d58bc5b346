#include <doctest.h>

#include <random>
#include <sstream>

#include "newsprop/csv.hpp"
#include "newsprop/pipeline.hpp"
#include "newsprop/report.hpp"

using namespace newsprop;

namespace {

FitResult make_fit(int w, double pre, double post, double se, Mode m = Mode::Own, Polarity p = Polarity::Positive) {
  FitResult f;
  f.w = w;
  f.mode = m;
  f.polarity = p;
  f.beta_pre = pre;
  f.beta_post = post;
  f.se_pre = f.se_post = se;
  f.diff = post - pre;
  f.diff_p = 0.0123;
  f.n_obs = 1000 + static_cast<std::size_t>(w);
  return f;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("effect plot rows for one fit") {
  const std::vector<FitResult> fits{make_fit(1, 0.3, 0.9, 0.01)};
  const auto rows = effect_plot_data(fits);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].x == -1);
  CHECK(rows[0].beta == 0.3);
  CHECK(rows[0].ci_lo == doctest::Approx(0.3 - 0.0196));
  CHECK(rows[0].ci_hi == doctest::Approx(0.3 + 0.0196));
  CHECK(rows[1].x == 1);
  CHECK(rows[1].beta == 0.9);
  CHECK(rows[1].ci_hi == doctest::Approx(0.9196));
}

TEST_CASE("full window grid, duplicates, empty input") {
  std::vector<FitResult> fits;
  for (int w : kDefaultWindows) fits.push_back(make_fit(w, 0.1 * w, 0.2 * w, 0.05));
  const auto rows = effect_plot_data(fits);
  REQUIRE(rows.size() == 16);
  CHECK(rows.front().x == -365);
  CHECK(rows.back().x == 365);
  CHECK(std::is_sorted(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.x < b.x; }));

  fits.push_back(make_fit(30, 1, 2, 0.1));
  try {
    effect_plot_data(fits);
    FAIL("expected duplicate");
  } catch (const EngineError& e) {
    CHECK(e.kind() == ErrorKind::DuplicateFit);
  }
  CHECK(effect_plot_data(std::vector<FitResult>{}).empty());
  // Same window in another polarity is not a duplicate.
  const std::vector<FitResult> two{make_fit(1, 0, 1, 0.1), make_fit(1, 0, 1, 0.1, Mode::Own, Polarity::Negative)};
  CHECK(effect_plot_data(two).size() == 4);
}

TEST_CASE("effects.csv re-parses to printed precision") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<FitResult> fits;
  for (int w : kDefaultWindows) fits.push_back(make_fit(w, z(rng), z(rng), std::abs(z(rng)) / 10));
  const auto rows = effect_plot_data(fits);
  const auto text = effects_to_csv(rows);
  const auto lines = lines_of(text);
  REQUIRE(lines.size() == rows.size() + 1);
  CHECK(lines[0] == kEffectsHeader);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto f = csv::split(lines[i + 1]);
    REQUIRE(f.size() == 7);
    CHECK(f[0] == "own");
    CHECK(*csv::parse_int(f[3]) == rows[i].x);
    CHECK(*csv::parse_double(f[4]) == rows[i].beta);
    CHECK(*csv::parse_double(f[5]) == rows[i].ci_lo);
    CHECK(*csv::parse_double(f[6]) == rows[i].ci_hi);
  }
}

TEST_CASE("three significant digits in scientific notation") {
  CHECK(format_sci3(0.323) == "3.23×10^-1");
  CHECK(format_sci3(0.923) == "9.23×10^-1");
  CHECK(format_sci3(-0.0456) == "-4.56×10^-2");
  CHECK(format_sci3(1234.0) == "1.23×10^3");
  CHECK(format_sci3(0.0) == "0.00×10^0");
}

TEST_CASE("coefficient table layout") {
  const std::vector<FitResult> one{make_fit(1, 0.323, 0.923, 0.01)};
  const auto lines = lines_of(coefficient_table(one));
  REQUIRE(lines.size() >= 7);
  CHECK(lines[0] == "mode=own polarity=positive");
  CHECK(lines[1].find("w=1") != std::string::npos);
  CHECK(lines[2].find("beta_pre") == 0);
  CHECK(lines[2].find("3.23×10^-1 (1.00×10^-2)") != std::string::npos);
  CHECK(lines[3].find("beta_post") == 0);
  CHECK(lines[4].find("diff") == 0);
  CHECK(lines[4].find(format_sci3(0.923 - 0.323)) != std::string::npos);
  CHECK(lines[5].find("p value") == 0);
  CHECK(lines[6].find("1001") != std::string::npos);

  std::vector<FitResult> grid;
  for (int w : kDefaultWindows) grid.push_back(make_fit(w, 0.01 * w, 0.03 * w, 0.001));
  const auto g = lines_of(coefficient_table(grid));
  CHECK(g[1].find("w=365") != std::string::npos);
  for (const auto& f : grid) CHECK(g[4].find(format_sci3(f.beta_post - f.beta_pre)) != std::string::npos);
  CHECK(coefficient_table(std::vector<FitResult>{}).empty());
}

TEST_CASE("histograms") {
  const std::vector<double> ints{1, 1, 2, 3};
  const auto h = histogram(ints, IntegerCounts{});
  CHECK(h == std::vector<std::pair<double, std::size_t>>{{1, 2}, {2, 1}, {3, 1}});
  CHECK(histogram(std::vector<double>{}, IntegerCounts{}).empty());
  const std::vector<double> gap{1, 4};
  CHECK(histogram(gap, IntegerCounts{}).size() == 4);
  CHECK_THROWS_AS(histogram(ints, FixedWidth{0.0}), EngineError);
  CHECK_THROWS_AS(histogram(ints, FixedWidth{-1.0}), EngineError);
  CHECK_THROWS_AS(histogram(std::vector<double>{}, FixedWidth{0.1}), EngineError);
  const std::vector<double> tenths{0.0, 0.1, 0.3, 0.35, 1.0};
  const auto t = histogram(tenths, FixedWidth{0.1});
  CHECK(t.size() == 11);
  CHECK(t[3].second == 2);
  CHECK(histogram_to_csv(t).find("\n0.3,2\n") != std::string::npos);

  std::mt19937_64 rng(12);
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> p_neu;
  for (int i = 0; i < 1000; ++i) {
    const double a = g(rng), b = g(rng), c = g(rng);
    p_neu.push_back(b / (a + b + c));
  }
  std::size_t total = 0;
  const auto bins = histogram(p_neu, FixedWidth{0.1});
  for (const auto& [bin, n] : bins) total += n;
  CHECK(total == 1000);
  for (std::size_t i = 1; i < bins.size(); ++i) CHECK(bins[i].first == doctest::Approx(bins[i - 1].first + 0.1));
}
