#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dh/quality/filters.hpp"

namespace dh::pipeline {

// Aggregates feeding the report CSVs; shaped after the tables the stats
// command reproduces at desk scale.
struct StatsBundle {
    std::map<std::string, std::uint64_t> entity_counts;  // by category name
    std::map<std::string, std::uint64_t> pages_per_language;
    // language -> merged-column name -> count
    std::map<std::string, std::map<std::string, std::uint64_t>> lang_entities;
    // language, perplexity threshold, cumulative word count
    std::vector<std::tuple<std::string, double, std::uint64_t>> ppl_cdf;
    std::vector<std::uint64_t> reliability_hist;  // 20 buckets over [0,1]
    std::map<std::string, std::uint64_t> fetch_outcomes_by_kind;  // rejection kinds
    std::uint64_t checked_urls = 0;
    std::uint64_t stored_documents = 0;
};

// Columns of the per-language entity table: heading levels merged, table
// structure excluded.
extern const std::vector<std::pair<std::string, std::string>> kLangEntityColumns;

StatsBundle build_stats(const std::vector<quality::DocMeta>& metas,
                        const std::filesystem::path& fetch_journal);

// entity_counts.csv, lang_pages.csv, lang_entities.csv, ppl_cdf.csv,
// reliability_hist.csv, rejections.csv
void write_stats_csvs(const StatsBundle& stats, const std::filesystem::path& stats_dir);

}  // namespace dh::pipeline
