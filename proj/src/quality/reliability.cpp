#include "dh/quality/reliability.hpp"

namespace dh::quality {

std::optional<double> reliability_score(const ReliabilityInput& input,
                                        ReliabilityWeighting weighting) {
    long double weight_total = 0;
    for (int i = 0; i < docx::kCategoryCount; ++i) {
        const CategoryTally& t = input.per_category[std::size_t(i)];
        if (t.entity_count == 0) continue;
        weight_total += weighting == ReliabilityWeighting::Entities
                            ? (long double)t.entity_count
                            : (long double)(t.reliable_chars + t.heuristic_chars);
    }
    if (weight_total <= 0) {
        // Character weighting can zero out even with entities present (all
        // empty); entity weighting only when there are no entities at all.
        bool any_entity = false;
        for (const auto& t : input.per_category) any_entity = any_entity || t.entity_count > 0;
        if (!any_entity || weighting == ReliabilityWeighting::Characters) return std::nullopt;
    }

    long double score = 0;
    for (int i = 0; i < docx::kCategoryCount; ++i) {
        const CategoryTally& t = input.per_category[std::size_t(i)];
        if (t.entity_count == 0) continue;
        const auto category = docx::Category(i);
        long double r;
        if (category == docx::Category::Table || category == docx::Category::Figure) {
            r = 1.0L;  // tables and figures may carry no characters at all
        } else if (t.reliable_chars + t.heuristic_chars == 0) {
            r = 1.0L;  // no-text entity
        } else {
            r = (long double)t.reliable_chars /
                (long double)(t.reliable_chars + t.heuristic_chars);
        }
        long double weight = weighting == ReliabilityWeighting::Entities
                                 ? (long double)t.entity_count
                                 : (long double)(t.reliable_chars + t.heuristic_chars);
        score += (weight / weight_total) * r;
    }
    return double(score);
}

ReliabilityInput reliability_input_of(const docx::DocumentModel& model) {
    ReliabilityInput input;
    for (const auto& e : model.elements) {
        CategoryTally& t = input.per_category[std::size_t(e.category)];
        t.entity_count += 1;
        if (docx::provenance_is_reliable(e.provenance)) t.reliable_chars += e.char_count;
        else t.heuristic_chars += e.char_count;
    }
    return input;
}

}  // namespace dh::quality
