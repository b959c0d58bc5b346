#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "newsprop/graph.hpp"
#include "newsprop/market.hpp"
#include "newsprop/registry.hpp"
#include "newsprop/sentiment.hpp"

namespace newsprop {

/// The five input stores the pipeline works over. Read-only once loaded.
struct Dataset {
  FirmRegistry firms;
  SeriesStore prices;
  SeriesStore indices;
  NewsStore news;
  SupplyChainGraph graph;
};

struct DatasetPaths {
  std::filesystem::path firms;
  std::filesystem::path prices;
  std::filesystem::path indices;
  std::filesystem::path news;
  std::filesystem::path edges;
};

/// Rejections from each loader, tagged with the file they came from.
struct IngestReport {
  std::vector<std::pair<std::string, Rejection>> rejected;
  std::size_t count() const noexcept { return rejected.size(); }
};

/// Loads all five files. Throws EngineError(Io) for an unreadable path and,
/// under strict ingestion, on the first rejected row.
Dataset load_dataset(const DatasetPaths& paths, const IngestOptions& opts, IngestReport* report = nullptr);

}  // namespace newsprop
