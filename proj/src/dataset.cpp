#include "newsprop/dataset.hpp"

#include <fstream>

#include "newsprop/csv.hpp"

namespace newsprop {

Dataset load_dataset(const DatasetPaths& paths, const IngestOptions& opts, IngestReport* report) {
  Dataset d;
  std::vector<Rejection> rej;
  auto collect = [&](const std::string& file) {
    if (report) {
      for (auto& r : rej) report->rejected.emplace_back(file, std::move(r));
    }
    rej.clear();
  };
  {
    auto in = csv::open_input(paths.firms);
    d.firms = FirmRegistry::load(in, opts, &rej);
    collect(paths.firms.filename().string());
  }
  {
    auto in = csv::open_input(paths.prices);
    d.prices = SeriesStore::load_prices(in, opts, &rej);
    collect(paths.prices.filename().string());
  }
  {
    auto in = csv::open_input(paths.indices);
    d.indices = SeriesStore::load_indices(in, opts, &rej);
    collect(paths.indices.filename().string());
  }
  {
    auto in = csv::open_input(paths.news);
    d.news = NewsStore::load(in, opts, &rej);
    collect(paths.news.filename().string());
  }
  {
    auto in = csv::open_input(paths.edges);
    d.graph = SupplyChainGraph::load_edges(in, opts, &rej);
    collect(paths.edges.filename().string());
  }
  return d;
}

}  // namespace newsprop
