#pragma once

#include <cstdint>
#include <optional>

#include "dh/docx/category.hpp"
#include "dh/docx/model.hpp"

namespace dh::quality {

struct CategoryTally {
    std::uint64_t entity_count = 0;       // c_i
    std::uint64_t reliable_chars = 0;     // b_i (BuiltinStyle / XmlTag)
    std::uint64_t heuristic_chars = 0;    // h_i
};

struct ReliabilityInput {
    std::array<CategoryTally, docx::kCategoryCount> per_category{};
};

enum class ReliabilityWeighting {
    Entities,    // weights from entity counts, as the printed equation states
    Characters,  // weights from character mass, the prose reading
};

// R = sum_i gamma_i * r_i with r_i = b_i / (b_i + h_i); Table and Figure are
// always fully reliable, as is any category without characters. Returns
// nothing when no entities exist (document flagged upstream).
std::optional<double> reliability_score(
    const ReliabilityInput& input,
    ReliabilityWeighting weighting = ReliabilityWeighting::Entities);

ReliabilityInput reliability_input_of(const docx::DocumentModel& model);

}  // namespace dh::quality
