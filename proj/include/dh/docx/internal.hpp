#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dh/core/xml.hpp"
#include "dh/docx/model.hpp"

// Shared between the extraction walk and the table parser; not public API.
namespace dh::docx::internal {

using TextExtractor = std::function<std::string(const xml::Node&)>;

std::optional<TableModel> parse_table_model(const xml::Node& tbl,
                                            const std::vector<std::size_t>& tbl_path,
                                            const TextExtractor& cell_text);

}  // namespace dh::docx::internal
