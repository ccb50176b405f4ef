#include "dh/harvest/harvest.hpp"

#include <mutex>

#include <nlohmann/json.hpp>

#include "dh/core/fsutil.hpp"
#include "dh/core/thread_pool.hpp"

namespace dh::harvest {

HarvestStats run_harvest(const HarvestOptions& options) {
    namespace stdfs = std::filesystem;
    HarvestStats stats;
    auto loader = options.loader
                      ? options.loader
                      : [](const std::string& path) { return fs::read_file(path); };

    std::vector<std::string> wat_paths;
    for (auto& line : fs::read_lines(options.manifest))
        if (!line.empty() && line[0] != '#') wat_paths.push_back(line);
    stats.wat_files = wat_paths.size();

    // Each worker fills a private list; merge steps below are single-owner.
    std::vector<std::vector<UrlRecord>> per_file(wat_paths.size());
    std::vector<WatParseResult> per_file_result(wat_paths.size());
    std::vector<char> failed(wat_paths.size(), 0);
    parallel_for_each(wat_paths.size(), options.workers, [&](std::size_t i) {
        try {
            Bytes raw = loader(wat_paths[i]);
            WatParseResult parsed = parse_wat_stream(raw);
            std::vector<UrlRecord> urls;
            for (const auto& rec : parsed.metadata_records) {
                auto found = extract_word_urls(rec, options.snapshot_id, wat_paths[i]);
                urls.insert(urls.end(), found.begin(), found.end());
            }
            per_file[i] = std::move(urls);
            per_file_result[i] = std::move(parsed);
        } catch (const std::exception&) {
            failed[i] = 1;
        }
    });

    std::vector<UrlRecord> raw_urls;
    for (std::size_t i = 0; i < wat_paths.size(); ++i) {
        if (failed[i]) {
            ++stats.wat_files_failed;
            continue;
        }
        stats.records_total += per_file_result[i].total_records;
        stats.records_malformed += per_file_result[i].malformed_records;
        raw_urls.insert(raw_urls.end(), per_file[i].begin(), per_file[i].end());
    }
    stats.raw_urls = raw_urls.size();

    std::vector<UrlRecord> snapshot_urls = dedup_snapshot(raw_urls);
    stats.snapshot_unique = snapshot_urls.size();
    stats.snapshot_dup_ratio =
        stats.raw_urls == 0 ? 0.0
                            : 1.0 - double(stats.snapshot_unique) / double(stats.raw_urls);

    stdfs::path urls_dir = options.output_dir / "urls";
    stdfs::create_directories(urls_dir);
    stdfs::path ledger_file = urls_dir / "global.ledger";
    UrlLedger ledger = UrlLedger::load(ledger_file);
    ledger.begin_snapshot(options.snapshot_id);
    std::vector<UrlRecord> kept = dedup_global(ledger, snapshot_urls);
    stats.global_unique = kept.size();

    std::string snapshot_out;
    for (const auto& r : kept) {
        snapshot_out += r.url;
        snapshot_out += '\n';
    }
    fs::write_file(urls_dir / (options.snapshot_id + ".txt"), snapshot_out);
    ledger.save(ledger_file);

    nlohmann::json j{{"wat_files", stats.wat_files},
                     {"wat_files_failed", stats.wat_files_failed},
                     {"records_total", stats.records_total},
                     {"records_malformed", stats.records_malformed},
                     {"raw_urls", stats.raw_urls},
                     {"snapshot_unique", stats.snapshot_unique},
                     {"global_unique", stats.global_unique},
                     {"snapshot_dup_ratio", stats.snapshot_dup_ratio}};
    fs::write_file(options.output_dir / "harvest_stats.json", j.dump(2) + "\n");
    return stats;
}

}  // namespace dh::harvest
