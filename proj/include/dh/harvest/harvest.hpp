#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "dh/core/bytes.hpp"
#include "dh/harvest/dedup.hpp"

namespace dh::harvest {

struct HarvestOptions {
    std::filesystem::path manifest;    // one .wat.gz path per line
    std::string snapshot_id;
    std::filesystem::path output_dir;  // receives urls/<snapshot>.txt etc.
    std::size_t workers = 4;
    // Maps a manifest entry to its bytes; defaults to local file reads.
    std::function<Bytes(const std::string&)> loader;
};

struct HarvestStats {
    std::size_t wat_files = 0;
    std::size_t wat_files_failed = 0;
    std::size_t records_total = 0;
    std::size_t records_malformed = 0;
    std::size_t raw_urls = 0;
    std::size_t snapshot_unique = 0;
    std::size_t global_unique = 0;
    double snapshot_dup_ratio = 0.0;  // fraction removed by per-snapshot dedup
};

// Runs the harvest stage: parallel WAT parsing, then single-owner
// per-snapshot and global dedup merge steps. Writes:
//   urls/<snapshot>.txt   one normalized URL per line
//   urls/global.ledger    sorted unique URLs across snapshots
//   harvest_stats.json
HarvestStats run_harvest(const HarvestOptions& options);

}  // namespace dh::harvest
