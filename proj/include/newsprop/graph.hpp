#pragma once

// Year-stamped directed supply-chain snapshots (edges run supplier -> client).

#include <istream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "newsprop/types.hpp"

namespace newsprop {

struct SupplyEdge {
  FirmId supplier;
  FirmId client;

  auto operator<=>(const SupplyEdge&) const = default;
};

struct NetworkStats {
  std::size_t n_firms = 0;
  std::size_t n_links = 0;
  std::size_t max_indegree = 0;
  std::size_t max_outdegree = 0;

  bool operator==(const NetworkStats&) const = default;
};

/// Edge set recorded for one calendar year. Immutable once built.
class SupplyChainSnapshot {
 public:
  SupplyChainSnapshot() = default;
  /// Collapses duplicates. Throws EngineError(SelfLoop / Malformed) on a
  /// self-loop or an empty id.
  SupplyChainSnapshot(int year, std::vector<SupplyEdge> edges);

  int year() const noexcept { return year_; }
  const std::vector<SupplyEdge>& edges() const noexcept { return edges_; }

  /// Sorted; empty when the firm has no incoming edges.
  const std::vector<FirmId>& suppliers_of(const FirmId& firm) const;
  /// Sorted; empty when the firm has no outgoing edges.
  const std::vector<FirmId>& clients_of(const FirmId& firm) const;

  /// Degree statistics. With a filter, only edges whose endpoints are both in
  /// the filter are retained and every filtered firm counts toward n_firms
  /// even when isolated (callers pass registry firms).
  NetworkStats stats(const std::set<FirmId>* filter = nullptr) const;

 private:
  int year_ = 0;
  std::vector<SupplyEdge> edges_;  // sorted, unique
  std::unordered_map<FirmId, std::vector<FirmId>> suppliers_;
  std::unordered_map<FirmId, std::vector<FirmId>> clients_;
};

class SupplyChainGraph {
 public:
  SupplyChainGraph() = default;
  explicit SupplyChainGraph(std::map<int, SupplyChainSnapshot> snapshots)
      : snapshots_(std::move(snapshots)) {}

  /// Reads `year,supplier_id,client_id`. A malformed row or a self-loop is a
  /// rejection; strict ingestion throws on the first one with its row number.
  static SupplyChainGraph load_edges(std::istream& in, const IngestOptions& opts = {.strict = true},
                                     std::vector<Rejection>* rejected = nullptr);

  const std::map<int, SupplyChainSnapshot>& snapshots() const noexcept { return snapshots_; }

  /// Throws EngineError(NoSnapshot) if `year` has no snapshot.
  const SupplyChainSnapshot& snapshot(int year) const;

  /// Most recent snapshot with year <= `year`, or nullptr.
  const SupplyChainSnapshot* snapshot_at_or_before(int year) const;

  std::vector<FirmId> suppliers_of(const FirmId& firm, int year) const;
  std::vector<FirmId> clients_of(const FirmId& firm, int year) const;

  NetworkStats network_stats(int year, const std::set<FirmId>* filter = nullptr) const;

  /// Serialises every snapshot in the edge-file schema, rows ordered by
  /// (year, supplier, client).
  std::string to_csv() const;

 private:
  std::map<int, SupplyChainSnapshot> snapshots_;
};

}  // namespace newsprop
