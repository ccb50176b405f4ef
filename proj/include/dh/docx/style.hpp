#pragma once

#include <map>
#include <optional>
#include <string>

#include "dh/core/xml.hpp"
#include "dh/docx/category.hpp"

namespace dh::docx {

// Effective character formatting after style resolution.
struct RunFormat {
    int font_size_half_points = 22;  // Word's default 11pt
    bool bold = false;
    bool italic = false;
    bool underline = false;

    bool operator==(const RunFormat&) const = default;
};

// The subset of rPr a style or direct formatting actually sets.
struct FormatPatch {
    std::optional<int> font_size_half_points;
    std::optional<bool> bold;
    std::optional<bool> italic;
    std::optional<bool> underline;

    static FormatPatch from_rpr(const xml::Node& rpr);
    void apply_to(RunFormat& fmt) const;
    bool empty() const {
        return !font_size_half_points && !bold && !italic && !underline;
    }
};

struct StyleDef {
    std::string id;
    std::string name;
    std::string type;      // paragraph/character/table
    std::string based_on;  // styleId
    FormatPatch patch;
};

// Styles part with basedOn inheritance resolved on demand.
class StyleRegistry {
public:
    static StyleRegistry from_styles_part(const xml::Node& styles_root);

    const StyleDef* find(std::string_view style_id) const;
    RunFormat effective_format(std::string_view style_id) const;
    const RunFormat& document_default() const { return defaults_; }

private:
    std::map<std::string, StyleDef> styles_;  // keyed by lowercase styleId
    RunFormat defaults_;
};

// Maps a built-in style id to its category; custom styles map to nothing.
std::optional<Category> builtin_style_category(std::string_view style_id);

}  // namespace dh::docx
