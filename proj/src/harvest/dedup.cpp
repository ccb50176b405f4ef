#include "dh/harvest/dedup.hpp"

#include <algorithm>

#include "dh/core/fsutil.hpp"

namespace dh::harvest {

void UrlLedger::begin_snapshot(const std::string& snapshot_id) {
    if (std::find(snapshot_order_.begin(), snapshot_order_.end(), snapshot_id) ==
        snapshot_order_.end())
        snapshot_order_.push_back(snapshot_id);
}

void UrlLedger::save(const std::filesystem::path& file) const {
    std::vector<std::string> sorted(seen_.begin(), seen_.end());
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (const auto& url : sorted) {
        out += url;
        out += '\n';
    }
    fs::write_file(file, out);
}

UrlLedger UrlLedger::load(const std::filesystem::path& file) {
    UrlLedger ledger;
    if (!std::filesystem::exists(file)) return ledger;
    for (auto& line : fs::read_lines(file))
        if (!line.empty()) ledger.seen_.insert(std::move(line));
    return ledger;
}

std::vector<UrlRecord> dedup_snapshot(const std::vector<UrlRecord>& records) {
    std::vector<UrlRecord> out;
    out.reserve(records.size());
    std::unordered_set<std::string> seen;
    for (const auto& r : records)
        if (seen.insert(r.url).second) out.push_back(r);
    return out;
}

std::vector<UrlRecord> dedup_global(UrlLedger& ledger, const std::vector<UrlRecord>& snapshot) {
    std::vector<UrlRecord> kept;
    kept.reserve(snapshot.size());
    for (const auto& r : snapshot)
        if (ledger.insert(r.url)) kept.push_back(r);
    return kept;
}

}  // namespace dh::harvest
