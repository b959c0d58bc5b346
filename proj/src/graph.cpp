#include "newsprop/graph.hpp"

#include <algorithm>

#include "newsprop/csv.hpp"

namespace newsprop {

namespace {

const std::vector<FirmId>& empty_firms() {
  static const std::vector<FirmId> none;
  return none;
}

}  // namespace

SupplyChainSnapshot::SupplyChainSnapshot(int year, std::vector<SupplyEdge> edges) : year_(year) {
  for (const auto& e : edges) {
    if (e.supplier.empty() || e.client.empty()) {
      throw EngineError(ErrorKind::Malformed, "empty firm id in supply edge");
    }
    if (e.supplier == e.client) {
      throw EngineError(ErrorKind::SelfLoop, "self-loop on firm '" + e.supplier + "'");
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  // edges_ is sorted by supplier then client, so each clients_ list comes out
  // sorted; suppliers_ lists need their own sort.
  for (const auto& e : edges_) {
    clients_[e.supplier].push_back(e.client);
    suppliers_[e.client].push_back(e.supplier);
  }
  for (auto& [firm, list] : suppliers_) std::sort(list.begin(), list.end());
}

const std::vector<FirmId>& SupplyChainSnapshot::suppliers_of(const FirmId& firm) const {
  const auto it = suppliers_.find(firm);
  return it == suppliers_.end() ? empty_firms() : it->second;
}

const std::vector<FirmId>& SupplyChainSnapshot::clients_of(const FirmId& firm) const {
  const auto it = clients_.find(firm);
  return it == clients_.end() ? empty_firms() : it->second;
}

NetworkStats SupplyChainSnapshot::stats(const std::set<FirmId>* filter) const {
  std::unordered_map<FirmId, std::size_t> indeg;
  std::unordered_map<FirmId, std::size_t> outdeg;
  std::set<FirmId> nodes;
  NetworkStats s;
  for (const auto& e : edges_) {
    if (filter && (!filter->contains(e.supplier) || !filter->contains(e.client))) continue;
    ++s.n_links;
    ++outdeg[e.supplier];
    ++indeg[e.client];
    nodes.insert(e.supplier);
    nodes.insert(e.client);
  }
  if (filter) nodes.insert(filter->begin(), filter->end());
  s.n_firms = nodes.size();
  for (const auto& [firm, d] : indeg) s.max_indegree = std::max(s.max_indegree, d);
  for (const auto& [firm, d] : outdeg) s.max_outdegree = std::max(s.max_outdegree, d);
  return s;
}

SupplyChainGraph SupplyChainGraph::load_edges(std::istream& in, const IngestOptions& opts,
                                              std::vector<Rejection>* rejected) {
  std::map<int, std::vector<SupplyEdge>> by_year;
  auto reject = [&](std::size_t row, ErrorKind kind, std::string msg) {
    msg = "edge row " + std::to_string(row) + ": " + msg;
    if (opts.strict) throw EngineError(kind, msg, row);
    if (rejected) rejected->push_back({row, kind, std::move(msg)});
  };
  csv::read_rows(in, "year,supplier_id,client_id", [&](const auto& f, std::size_t row) {
    if (f.size() != 3) return reject(row, ErrorKind::Malformed, "expected 3 columns");
    const auto year = csv::parse_int(f[0]);
    if (!year) return reject(row, ErrorKind::Malformed, "bad year '" + std::string(f[0]) + "'");
    if (f[1].empty() || f[2].empty()) return reject(row, ErrorKind::Malformed, "empty firm id");
    if (f[1] == f[2]) return reject(row, ErrorKind::SelfLoop, "self-loop on '" + std::string(f[1]) + "'");
    by_year[static_cast<int>(*year)].push_back({std::string(f[1]), std::string(f[2])});
  });
  std::map<int, SupplyChainSnapshot> snaps;
  for (auto& [year, edges] : by_year) snaps.emplace(year, SupplyChainSnapshot(year, std::move(edges)));
  return SupplyChainGraph(std::move(snaps));
}

const SupplyChainSnapshot& SupplyChainGraph::snapshot(int year) const {
  const auto it = snapshots_.find(year);
  if (it == snapshots_.end()) {
    throw EngineError(ErrorKind::NoSnapshot, "no supply-chain snapshot for year " + std::to_string(year));
  }
  return it->second;
}

const SupplyChainSnapshot* SupplyChainGraph::snapshot_at_or_before(int year) const {
  auto it = snapshots_.upper_bound(year);
  if (it == snapshots_.begin()) return nullptr;
  return &std::prev(it)->second;
}

std::vector<FirmId> SupplyChainGraph::suppliers_of(const FirmId& firm, int year) const {
  return snapshot(year).suppliers_of(firm);
}

std::vector<FirmId> SupplyChainGraph::clients_of(const FirmId& firm, int year) const {
  return snapshot(year).clients_of(firm);
}

NetworkStats SupplyChainGraph::network_stats(int year, const std::set<FirmId>* filter) const {
  return snapshot(year).stats(filter);
}

std::string SupplyChainGraph::to_csv() const {
  std::string out = "year,supplier_id,client_id\n";
  for (const auto& [year, snap] : snapshots_) {
    const auto y = std::to_string(year);
    for (const auto& e : snap.edges()) {
      out += y;
      out += ',';
      out += e.supplier;
      out += ',';
      out += e.client;
      out += '\n';
    }
  }
  return out;
}

}  // namespace newsprop
