#include "dh/quality/filters.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace dh::quality {

std::string meta_to_json(const DocMeta& meta) {
    nlohmann::json j;
    j["hash"] = meta.hash;
    j["page_count"] = meta.page_count;
    j["stats"] = {{"char_count", meta.stats.char_count},
                  {"word_count", meta.stats.word_count},
                  {"alpha_chars", meta.stats.alpha_chars},
                  {"numeric_chars", meta.stats.numeric_chars},
                  {"alnum_proportion", meta.stats.alnum_proportion},
                  {"alpha_to_numeric_ratio", meta.stats.alpha_to_numeric_ratio}};
    j["language"] = {{"code", meta.language.code}, {"confidence", meta.language.confidence}};
    auto pages = nlohmann::json::array();
    for (const auto& p : meta.page_languages)
        pages.push_back({{"code", p.code}, {"confidence", p.confidence}});
    j["page_languages"] = std::move(pages);
    if (meta.perplexity) j["perplexity"] = *meta.perplexity;
    else j["perplexity"] = nullptr;
    if (meta.reliability) j["reliability"] = *meta.reliability;
    else j["reliability"] = nullptr;
    j["entity_counts"] = meta.entity_counts;
    return j.dump(2) + "\n";
}

DocMeta meta_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DocMeta meta;
    meta.hash = j.value("hash", "");
    meta.page_count = j.value("page_count", 0);
    if (j.contains("stats")) {
        const auto& s = j["stats"];
        meta.stats.char_count = s.value("char_count", std::size_t(0));
        meta.stats.word_count = s.value("word_count", std::size_t(0));
        meta.stats.alpha_chars = s.value("alpha_chars", std::size_t(0));
        meta.stats.numeric_chars = s.value("numeric_chars", std::size_t(0));
        meta.stats.alnum_proportion = s.value("alnum_proportion", 0.0);
        meta.stats.alpha_to_numeric_ratio = s.value("alpha_to_numeric_ratio", 0.0);
    }
    if (j.contains("language") && j["language"].is_object()) {
        meta.language.code = j["language"].value("code", "und");
        meta.language.confidence = j["language"].value("confidence", 0.0);
    }
    if (j.contains("page_languages"))
        for (const auto& p : j["page_languages"])
            meta.page_languages.push_back(
                LanguageGuess{p.value("code", "und"), p.value("confidence", 0.0)});
    if (j.contains("perplexity") && j["perplexity"].is_number())
        meta.perplexity = j["perplexity"].get<double>();
    if (j.contains("reliability") && j["reliability"].is_number())
        meta.reliability = j["reliability"].get<double>();
    if (j.contains("entity_counts"))
        meta.entity_counts = j["entity_counts"].get<std::map<std::string, std::uint64_t>>();
    return meta;
}

FilterOutcome apply_filters(const std::vector<DocMeta>& records, const FilterSpec& spec) {
    FilterOutcome outcome;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const DocMeta& m = records[i];
        if (!spec.languages.empty() &&
            std::find(spec.languages.begin(), spec.languages.end(), m.language.code) ==
                spec.languages.end()) {
            ++outcome.rejected_by_predicate["language"];
            continue;
        }
        if (spec.min_confidence && m.language.confidence < *spec.min_confidence) {
            ++outcome.rejected_by_predicate["min_confidence"];
            continue;
        }
        if (spec.min_reliability && (!m.reliability || *m.reliability < *spec.min_reliability)) {
            ++outcome.rejected_by_predicate["min_reliability"];
            continue;
        }
        if (spec.min_perplexity && (!m.perplexity || *m.perplexity < *spec.min_perplexity)) {
            ++outcome.rejected_by_predicate["min_perplexity"];
            continue;
        }
        if (spec.max_perplexity && (!m.perplexity || *m.perplexity > *spec.max_perplexity)) {
            ++outcome.rejected_by_predicate["max_perplexity"];
            continue;
        }
        bool entity_fail = false;
        for (const auto& [category, minimum] : spec.min_entities) {
            auto it = m.entity_counts.find(category);
            std::uint64_t have = it == m.entity_counts.end() ? 0 : it->second;
            if (have < minimum) {
                entity_fail = true;
                break;
            }
        }
        if (entity_fail) {
            ++outcome.rejected_by_predicate["min_entities"];
            continue;
        }
        outcome.accepted.push_back(i);
    }
    return outcome;
}

}  // namespace dh::quality
