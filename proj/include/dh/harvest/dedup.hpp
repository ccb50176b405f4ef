#pragma once

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "dh/harvest/wat.hpp"

namespace dh::harvest {

// Global URL ledger across snapshots. Snapshots are expected newest-first;
// the first snapshot to insert a URL owns it.
class UrlLedger {
public:
    bool contains(const std::string& url) const { return seen_.count(url) > 0; }
    std::size_t size() const { return seen_.size(); }

    void begin_snapshot(const std::string& snapshot_id);
    const std::vector<std::string>& snapshot_order() const { return snapshot_order_; }

    // Inserts; returns false when already present.
    bool insert(const std::string& url) { return seen_.insert(url).second; }

    // Sorted unique URLs, one per line.
    void save(const std::filesystem::path& file) const;
    static UrlLedger load(const std::filesystem::path& file);

private:
    std::unordered_set<std::string> seen_;
    std::vector<std::string> snapshot_order_;
};

// First occurrence kept, stable order.
std::vector<UrlRecord> dedup_snapshot(const std::vector<UrlRecord>& records);

// Records absent from the ledger are kept and added to it.
std::vector<UrlRecord> dedup_global(UrlLedger& ledger, const std::vector<UrlRecord>& snapshot);

}  // namespace dh::harvest
