#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dh/docx/category.hpp"
#include "dh/quality/lang_id.hpp"
#include "dh/quality/text_stats.hpp"

namespace dh::quality {

// Per-document quality metadata, the unit the filter predicates run on.
struct DocMeta {
    std::string hash;
    int page_count = 0;
    TextStats stats;
    LanguageGuess language;                          // document level
    std::vector<LanguageGuess> page_languages;       // per page
    std::optional<double> perplexity;
    std::optional<double> reliability;
    std::map<std::string, std::uint64_t> entity_counts;  // category name -> count
};

std::string meta_to_json(const DocMeta& meta);
DocMeta meta_from_json(const std::string& text);

// Conjunction of predicates; an empty spec accepts everything.
struct FilterSpec {
    std::vector<std::string> languages;  // allow-list, empty = any
    std::optional<double> min_confidence;
    std::optional<double> min_reliability;
    std::optional<double> min_perplexity;
    std::optional<double> max_perplexity;
    std::map<std::string, std::uint64_t> min_entities;  // category name -> minimum

    bool empty() const {
        return languages.empty() && !min_confidence && !min_reliability && !min_perplexity &&
               !max_perplexity && min_entities.empty();
    }
};

struct FilterOutcome {
    std::vector<std::size_t> accepted;                  // indices into the input
    std::map<std::string, std::size_t> rejected_by_predicate;  // first failing predicate
};

// Predicates evaluate in a fixed order (language, confidence, reliability,
// perplexity, entities) so rejection counts reconcile exactly:
// accepted + sum(rejections) == inputs.
FilterOutcome apply_filters(const std::vector<DocMeta>& records, const FilterSpec& spec);

}  // namespace dh::quality
