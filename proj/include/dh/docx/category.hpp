#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace dh::docx {

// The closed 30-category label set. TableRow and TableColumn are derived from
// detected cell boxes, never assigned while parsing.
enum class Category {
    Title,
    Heading1, Heading2, Heading3, Heading4, Heading5,
    Heading6, Heading7, Heading8, Heading9,
    PlainText,
    ListItem,
    Header,
    Footer,
    TableHeader,
    TableHeaderCell,
    Table,
    TableCell,
    TableOfContents,
    Bibliography,
    Quote,
    Equation,
    Figure,
    TableCaption,
    Footnote,
    Annotation,
    FormField,
    FormTag,
    TableRow,
    TableColumn,
};

constexpr int kCategoryCount = 30;

std::string_view category_name(Category c);
std::optional<Category> category_from_name(std::string_view name);

constexpr std::array<Category, kCategoryCount> all_categories() {
    std::array<Category, kCategoryCount> out{};
    for (int i = 0; i < kCategoryCount; ++i) out[std::size_t(i)] = Category(i);
    return out;
}

inline Category heading_level(int level) {  // level in [1,9]
    return Category(int(Category::Heading1) + level - 1);
}

inline bool is_heading(Category c) {
    return c >= Category::Heading1 && c <= Category::Heading9;
}

// Table-structure categories excluded from the per-language entity report.
bool is_table_structure(Category c);

enum class Provenance {
    BuiltinStyle,
    XmlTag,
    HeuristicStyleMatch,
    HeuristicContent,
    HeuristicFontRank,
    FallbackPlainText,
};

std::string_view provenance_name(Provenance p);
std::optional<Provenance> provenance_from_name(std::string_view name);

// BuiltinStyle and XmlTag count as reliable for the reliability score.
inline bool provenance_is_reliable(Provenance p) {
    return p == Provenance::BuiltinStyle || p == Provenance::XmlTag;
}

}  // namespace dh::docx
