#pragma once

// Regression sample assembly. Each exposed (event, firm) pair yields one pre
// and one post observation, or none at all.

#include <map>
#include <string>
#include <vector>

#include "newsprop/dataset.hpp"
#include "newsprop/types.hpp"

namespace newsprop {

inline constexpr std::string_view kPanelHeader = "firm_id,news_id,w,period,y,news_value,market_x,sector,market";

struct Observation {
  FirmId firm_id;
  NewsId news_id;
  int w = 1;
  Period period = Period::Pre;
  double y = 0.0;           // percent per day
  double news_value = 0.0;  // selected polarity probability
  double market_x = 0.0;    // percent per day
  SectorCode sector;
  MarketId market;
  Date anchor;
  bool anchor_shifted = false;

  double pre() const { return period == Period::Pre ? 1.0 : 0.0; }
  double post() const { return period == Period::Post ? 1.0 : 0.0; }
};

enum class DropReason { UnknownFirm, MissingSectorOrMarket, PriceWindow, IndexWindow, NoSnapshot };

std::string_view to_string(DropReason r);

struct DropRecord {
  NewsId news_id;
  FirmId firm_id;  // empty for event-level drops (no snapshot)
  DropReason reason = DropReason::PriceWindow;

  auto operator<=>(const DropRecord&) const = default;
};

struct Panel {
  Mode mode = Mode::Own;
  Polarity polarity = Polarity::Positive;
  int w = 1;
  std::vector<Observation> rows;  // sorted by (news_id, firm_id, period)
  std::vector<DropRecord> drops;  // sorted
};

/// Builds the sample for one (mode, polarity, w) cell.
///
/// own: every mentioned firm of every event. supplier / client: the union,
/// over the event's mentioned firms, of their suppliers / clients in the most
/// recent snapshot no later than the event year, minus firms the same event
/// mentions. A pair is kept only when both periods have full price and index
/// windows. `threads` splits the event list; output does not depend on it.
Panel build_panel(const Dataset& data, Mode mode, Polarity polarity, int w, unsigned threads = 1);

struct PanelSummary {
  std::size_t n_obs = 0;
  std::size_t n_events = 0;
  std::size_t n_firms = 0;
  std::map<DropReason, std::size_t> drop_counts;
};

PanelSummary panel_summary(const Panel& panel);

std::string panel_to_csv(const Panel& panel);

}  // namespace newsprop
