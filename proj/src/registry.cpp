#include "newsprop/registry.hpp"

#include "newsprop/csv.hpp"

namespace newsprop {

FirmRegistry::FirmRegistry(std::vector<FirmRecord> firms) {
  for (auto& f : firms) {
    if (f.id.empty()) throw EngineError(ErrorKind::Malformed, "empty firm id in registry");
    const auto id = f.id;
    if (!firms_.emplace(id, std::move(f)).second) {
      throw EngineError(ErrorKind::Duplicate, "duplicate firm '" + id + "' in registry");
    }
  }
}

FirmRegistry FirmRegistry::load(std::istream& in, const IngestOptions& opts, std::vector<Rejection>* rejected) {
  FirmRegistry reg;
  auto reject = [&](std::size_t row, ErrorKind kind, std::string msg) {
    msg = "firm row " + std::to_string(row) + ": " + msg;
    if (opts.strict) throw EngineError(kind, msg, row);
    if (rejected) rejected->push_back({row, kind, std::move(msg)});
  };
  csv::read_rows(in, kFirmHeader, [&](const auto& f, std::size_t row) {
    if (f.size() != 4) return reject(row, ErrorKind::Malformed, "expected 4 columns");
    if (f[0].empty()) return reject(row, ErrorKind::Malformed, "empty firm id");
    FirmRecord rec{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3])};
    if (reg.firms_.contains(rec.id)) return reject(row, ErrorKind::Duplicate, "duplicate firm '" + rec.id + "'");
    reg.firms_.emplace(rec.id, std::move(rec));
  });
  return reg;
}

const FirmRecord* FirmRegistry::find(const FirmId& id) const {
  const auto it = firms_.find(id);
  return it == firms_.end() ? nullptr : &it->second;
}

std::set<FirmId> FirmRegistry::ids() const {
  std::set<FirmId> out;
  for (const auto& [id, rec] : firms_) out.insert(id);
  return out;
}

std::string FirmRegistry::to_csv() const {
  std::string out(kFirmHeader);
  out += '\n';
  for (const auto& [id, f] : firms_) out += f.id + "," + f.market + "," + f.sector + "," + f.country + "\n";
  return out;
}

}  // namespace newsprop
