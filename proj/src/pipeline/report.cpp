#include "dh/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dh/core/fsutil.hpp"
#include "dh/fetch/outcome.hpp"

namespace dh::pipeline {

// Heading levels merge into one column; table structure stays out.
const std::vector<std::pair<std::string, std::string>> kLangEntityColumns = {
    {"heading", ""},  // Heading1..9, special-cased below
    {"title", "Title"},
    {"text", "PlainText"},
    {"list", "ListItem"},
    {"header", "Header"},
    {"footer", "Footer"},
    {"toc", "TableOfContents"},
    {"bibliography", "Bibliography"},
    {"quote", "Quote"},
    {"equation", "Equation"},
    {"figure", "Figure"},
    {"footnote", "Footnote"},
    {"annotation", "Annotation"},
    {"form tag", "FormTag"},
    {"form field", "FormField"},
    {"table", "Table"},
};

StatsBundle build_stats(const std::vector<quality::DocMeta>& metas,
                        const std::filesystem::path& fetch_journal) {
    StatsBundle stats;
    stats.reliability_hist.assign(20, 0);

    for (const auto& meta : metas) {
        for (const auto& [category, count] : meta.entity_counts)
            stats.entity_counts[category] += count;
        for (const auto& page : meta.page_languages) ++stats.pages_per_language[page.code];
        auto& row = stats.lang_entities[meta.language.code];
        for (const auto& [column, category] : kLangEntityColumns) {
            std::uint64_t value = 0;
            if (column == "heading") {
                for (int level = 1; level <= 9; ++level) {
                    auto it = meta.entity_counts.find("Heading" + std::to_string(level));
                    if (it != meta.entity_counts.end()) value += it->second;
                }
            } else {
                auto it = meta.entity_counts.find(category);
                if (it != meta.entity_counts.end()) value = it->second;
            }
            row[column] += value;
        }
        if (meta.reliability) {
            int bucket = std::min(19, int(*meta.reliability * 20.0));
            ++stats.reliability_hist[std::size_t(std::max(0, bucket))];
        }
    }

    // Perplexity CDF per language: cumulative words at each document's value.
    std::map<std::string, std::vector<std::pair<double, std::uint64_t>>> by_lang;
    for (const auto& meta : metas)
        if (meta.perplexity)
            by_lang[meta.language.code].emplace_back(*meta.perplexity, meta.stats.word_count);
    for (auto& [lang, docs] : by_lang) {
        std::sort(docs.begin(), docs.end());
        std::uint64_t cumulative = 0;
        for (const auto& [ppl, words] : docs) {
            cumulative += words;
            stats.ppl_cdf.emplace_back(lang, ppl, cumulative);
        }
    }

    if (std::filesystem::exists(fetch_journal)) {
        for (const auto& line : fs::read_lines(fetch_journal)) {
            if (line.empty()) continue;
            auto outcome = fetch::outcome_from_jsonl(line);
            if (!outcome) continue;
            ++stats.checked_urls;
            if (outcome->status == fetch::FetchStatus::Stored) {
                ++stats.stored_documents;
            } else {
                ++stats.fetch_outcomes_by_kind[fetch::to_string(outcome->reason.kind)];
            }
        }
    }
    return stats;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string format_double(double v, int digits = 12) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << v;
    return out.str();
}

}  // namespace

void write_stats_csvs(const StatsBundle& stats, const std::filesystem::path& stats_dir) {
    std::filesystem::create_directories(stats_dir);

    // entity_counts.csv: category, count, frequency (all 30 rows)
    {
        std::uint64_t total = 0;
        for (const auto& [_, count] : stats.entity_counts) total += count;
        std::string out = "category,count,frequency\n";
        for (int i = 0; i < docx::kCategoryCount; ++i) {
            std::string name(docx::category_name(docx::Category(i)));
            auto it = stats.entity_counts.find(name);
            std::uint64_t count = it == stats.entity_counts.end() ? 0 : it->second;
            double freq = total > 0 ? double(count) / double(total) : 0.0;
            out += name + "," + std::to_string(count) + "," + format_double(freq) + "\n";
        }
        fs::write_file(stats_dir / "entity_counts.csv", out);
    }

    {
        std::string out = "language,pages\n";
        for (const auto& [lang, pages] : stats.pages_per_language)
            out += csv_escape(lang) + "," + std::to_string(pages) + "\n";
        fs::write_file(stats_dir / "lang_pages.csv", out);
    }

    {
        std::string out = "lang,total";
        for (const auto& [column, _] : kLangEntityColumns) out += "," + column;
        out += "\n";
        for (const auto& [lang, row] : stats.lang_entities) {
            std::uint64_t total = 0;
            for (const auto& [column, _] : kLangEntityColumns) {
                auto it = row.find(column);
                total += it == row.end() ? 0 : it->second;
            }
            out += csv_escape(lang) + "," + std::to_string(total);
            for (const auto& [column, _] : kLangEntityColumns) {
                auto it = row.find(column);
                out += "," + std::to_string(it == row.end() ? 0 : it->second);
            }
            out += "\n";
        }
        fs::write_file(stats_dir / "lang_entities.csv", out);
    }

    {
        std::string out = "language,threshold,words\n";
        for (const auto& [lang, threshold, words] : stats.ppl_cdf)
            out += csv_escape(lang) + "," + format_double(threshold, 4) + "," +
                   std::to_string(words) + "\n";
        fs::write_file(stats_dir / "ppl_cdf.csv", out);
    }

    {
        std::string out = "bucket_lo,bucket_hi,count\n";
        for (std::size_t b = 0; b < stats.reliability_hist.size(); ++b) {
            double lo = double(b) / double(stats.reliability_hist.size());
            double hi = double(b + 1) / double(stats.reliability_hist.size());
            out += format_double(lo, 2) + "," + format_double(hi, 2) + "," +
                   std::to_string(stats.reliability_hist[b]) + "\n";
        }
        fs::write_file(stats_dir / "reliability_hist.csv", out);
    }

    // rejections.csv mirrors the download-error table: five error families as
    // percentages of all rejections, plus totals.
    {
        auto kind_count = [&](const std::string& kind) -> std::uint64_t {
            auto it = stats.fetch_outcomes_by_kind.find(kind);
            return it == stats.fetch_outcomes_by_kind.end() ? 0 : it->second;
        };
        std::uint64_t http_code = kind_count("HttpCode");
        std::uint64_t content_type = kind_count("ContentType") + kind_count("WrongFileFormat");
        std::uint64_t retry_redirect = kind_count("RetryRedirect");
        std::uint64_t maldoc = kind_count("Maldoc");
        std::uint64_t total = 0;
        for (const auto& [_, n] : stats.fetch_outcomes_by_kind) total += n;
        std::uint64_t other = total - http_code - content_type - retry_redirect - maldoc;
        auto pct = [&](std::uint64_t n) {
            return total > 0 ? format_double(100.0 * double(n) / double(total), 3) : "0.000";
        };
        std::string out =
            "other,http_code,content_type,retry_redirect,maldoc,total_rejections,checked_urls\n";
        out += pct(other) + "," + pct(http_code) + "," + pct(content_type) + "," +
               pct(retry_redirect) + "," + pct(maldoc) + "," + std::to_string(total) + "," +
               std::to_string(stats.checked_urls) + "\n";
        fs::write_file(stats_dir / "rejections.csv", out);
    }
}

}  // namespace dh::pipeline
