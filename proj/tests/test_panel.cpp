#include <doctest.h>

#include "newsprop/panel.hpp"
#include "test_support.hpp"

using namespace newsprop;
using newsprop::testing::MiniBundle;

TEST_CASE("no events gives an empty panel") {
  MiniBundle b;
  b.firm("A");
  const auto p = build_panel(b.build(), Mode::Own, Polarity::Positive, 1);
  CHECK(p.rows.empty());
  const auto s = panel_summary(p);
  CHECK(s.n_obs == 0);
  CHECK(s.n_events == 0);
  CHECK(s.n_firms == 0);
  CHECK(s.drop_counts.empty());
}

TEST_CASE("own mode: one pre and one post observation") {
  MiniBundle b;
  b.firm("A");
  b.event("N1", 10, {"A"}, 0.8, 0.1);
  const auto data = b.build();
  const auto p = build_panel(data, Mode::Own, Polarity::Positive, 2);
  REQUIRE(p.rows.size() == 2);
  CHECK(p.rows[0].period == Period::Pre);
  CHECK(p.rows[1].period == Period::Post);
  CHECK(p.rows[0].news_value == 0.8);
  const auto pre = window_change(*data.prices.find("A"), b.days[10], 2, Period::Pre);
  const auto x = market_control(*data.indices.find("M1"), b.days[10], 2, Period::Post);
  CHECK(p.rows[0].y == pre->value);
  CHECK(p.rows[1].market_x == *x);
  const auto s = panel_summary(p);
  CHECK(s.n_obs == 2);
  CHECK(s.n_events == 1);
  CHECK(s.n_firms == 1);
  const auto neg = build_panel(data, Mode::Own, Polarity::Negative, 2);
  CHECK(neg.rows[0].news_value == doctest::Approx(0.1));
}

TEST_CASE("supplier mode fans out to suppliers") {
  MiniBundle b;
  for (const char* f : {"J", "A", "B", "C"}) b.firm(f);
  b.edges = {{"A", "J"}, {"B", "J"}, {"J", "C"}};
  b.event("N1", 10, {"J"});
  const auto data = b.build();
  const auto sup = build_panel(data, Mode::Supplier, Polarity::Positive, 1);
  CHECK(sup.rows.size() == 4);
  CHECK(panel_summary(sup).n_firms == 2);
  const auto cli = build_panel(data, Mode::Client, Polarity::Positive, 1);
  REQUIRE(cli.rows.size() == 2);
  CHECK(cli.rows[0].firm_id == "C");
}

TEST_CASE("co-mentioned firms are excluded from the indirect set") {
  MiniBundle b;
  for (const char* f : {"J", "A", "B"}) b.firm(f);
  b.edges = {{"A", "J"}, {"B", "J"}, {"A", "B"}};
  b.event("N1", 10, {"J", "B"});
  const auto p = build_panel(b.build(), Mode::Supplier, Polarity::Positive, 1);
  // A supplies both J and B but yields one pair; B is mentioned.
  REQUIRE(p.rows.size() == 2);
  CHECK(p.rows[0].firm_id == "A");
}

TEST_CASE("drop reasons") {
  MiniBundle b;
  b.firm("A");
  b.firm("B");
  b.firm("C", "", "M1");
  b.firm("D", "S1", "M9");
  b.unpriced = {"D"};
  b.firm("E", "S1", "M2");
  b.event("N1", 10, {"A", "B", "Z"});
  b.event("N2", 0, {"A"});
  b.event("N3", 12, {"C", "E"});
  auto data = b.build();
  // E's market has no index.
  std::map<std::string, DailySeries> idx;
  for (const auto& [id, s] : data.indices.all()) {
    if (id != "M2") idx.emplace(id, s);
  }
  data.indices = SeriesStore(std::move(idx));

  const auto p = build_panel(data, Mode::Own, Polarity::Positive, 1);
  const auto s = panel_summary(p);
  CHECK(s.n_obs == 4);
  CHECK(s.drop_counts.at(DropReason::UnknownFirm) == 1);
  CHECK(s.drop_counts.at(DropReason::PriceWindow) == 1);
  CHECK(s.drop_counts.at(DropReason::MissingSectorOrMarket) == 1);
  CHECK(s.drop_counts.at(DropReason::IndexWindow) == 1);
  CHECK(p.drops.front() == DropRecord{"N1", "Z", DropReason::UnknownFirm});
}

TEST_CASE("three pairs, one without prices") {
  MiniBundle b;
  for (const char* f : {"A", "B", "C"}) b.firm(f);
  b.unpriced = {"C"};
  b.event("N1", 10, {"A", "B", "C"});
  const auto s = panel_summary(build_panel(b.build(), Mode::Own, Polarity::Positive, 1));
  CHECK(s.n_obs == 4);
  CHECK(s.drop_counts == std::map<DropReason, std::size_t>{{DropReason::PriceWindow, 1}});
}

TEST_CASE("missing snapshot drops the event for indirect modes only") {
  MiniBundle b;
  b.firm("A");
  b.firm("B");
  b.edges = {{"B", "A"}};
  b.event("N1", 10, {"A"});
  auto data = b.build();
  std::map<int, SupplyChainSnapshot> later;
  later.emplace(2022, SupplyChainSnapshot(2022, {{"B", "A"}}));
  data.graph = SupplyChainGraph(std::move(later));
  const auto p = build_panel(data, Mode::Supplier, Polarity::Positive, 1);
  CHECK(p.rows.empty());
  REQUIRE(p.drops.size() == 1);
  CHECK(p.drops[0].reason == DropReason::NoSnapshot);
  CHECK(build_panel(data, Mode::Own, Polarity::Positive, 1).rows.size() == 2);
}

TEST_CASE("balance, polarity invariance and thread independence") {
  MiniBundle b;
  b.days = newsprop::testing::weekdays(newsprop::testing::ymd(2021, 1, 4), 120);
  for (int i = 0; i < 12; ++i) b.firm("F" + std::to_string(i), "S" + std::to_string(i % 3), "M" + std::to_string(i % 2));
  for (int i = 0; i < 11; ++i) b.edges.push_back({"F" + std::to_string(i), "F" + std::to_string(i + 1)});
  for (int k = 0; k < 40; ++k) {
    b.event("N" + std::to_string(100 + k), static_cast<std::size_t>(k * 3),
            {"F" + std::to_string(k % 12), "F" + std::to_string((k * 5 + 1) % 12)}, 0.6, 0.3);
  }
  const auto data = b.build();
  for (auto mode : {Mode::Own, Mode::Supplier, Mode::Client}) {
    for (int w : {1, 3, 10}) {
      const auto pos = build_panel(data, mode, Polarity::Positive, w);
      const auto neg = build_panel(data, mode, Polarity::Negative, w);
      const auto par = build_panel(data, mode, Polarity::Positive, w, 4);
      CHECK(panel_to_csv(par) == panel_to_csv(pos));
      CHECK(par.drops == pos.drops);
      REQUIRE(pos.rows.size() == neg.rows.size());
      REQUIRE(pos.rows.size() % 2 == 0);
      for (std::size_t i = 0; i < pos.rows.size(); i += 2) {
        CHECK(pos.rows[i].period == Period::Pre);
        CHECK(pos.rows[i + 1].period == Period::Post);
        CHECK(pos.rows[i].firm_id == pos.rows[i + 1].firm_id);
        CHECK(pos.rows[i].news_id == pos.rows[i + 1].news_id);
        CHECK(pos.rows[i].y == neg.rows[i].y);
        CHECK(pos.rows[i].market_x == neg.rows[i].market_x);
      }
    }
  }
}
