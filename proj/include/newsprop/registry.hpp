#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "newsprop/types.hpp"

namespace newsprop {

inline constexpr std::string_view kFirmHeader = "firm_id,market_id,sector_code,country";

/// Firm identity, listing market and sector. Market or sector may be blank;
/// the panel builder skips such firms with an audit record.
struct FirmRecord {
  FirmId id;
  MarketId market;
  SectorCode sector;
  std::string country;
};

class FirmRegistry {
 public:
  FirmRegistry() = default;
  explicit FirmRegistry(std::vector<FirmRecord> firms);

  /// Rejects rows with the wrong column count, an empty firm id, or a firm id
  /// already seen.
  static FirmRegistry load(std::istream& in, const IngestOptions& opts = {},
                           std::vector<Rejection>* rejected = nullptr);

  const FirmRecord* find(const FirmId& id) const;
  const std::map<FirmId, FirmRecord>& all() const noexcept { return firms_; }
  std::set<FirmId> ids() const;
  std::size_t size() const noexcept { return firms_.size(); }

  std::string to_csv() const;

 private:
  std::map<FirmId, FirmRecord> firms_;
};

}  // namespace newsprop
