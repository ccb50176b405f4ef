#include "dh/docx/category.hpp"

namespace dh::docx {

namespace {

constexpr std::string_view kNames[kCategoryCount] = {
    "Title",     "Heading1",        "Heading2", "Heading3",  "Heading4",
    "Heading5",  "Heading6",        "Heading7", "Heading8",  "Heading9",
    "PlainText", "ListItem",        "Header",   "Footer",    "TableHeader",
    "TableHeaderCell", "Table",     "TableCell", "TableOfContents", "Bibliography",
    "Quote",     "Equation",        "Figure",   "TableCaption", "Footnote",
    "Annotation", "FormField",      "FormTag",  "TableRow",  "TableColumn",
};

constexpr std::string_view kProvenanceNames[] = {
    "BuiltinStyle", "XmlTag", "HeuristicStyleMatch", "HeuristicContent",
    "HeuristicFontRank", "FallbackPlainText",
};

}  // namespace

std::string_view category_name(Category c) { return kNames[int(c)]; }

std::optional<Category> category_from_name(std::string_view name) {
    for (int i = 0; i < kCategoryCount; ++i)
        if (kNames[i] == name) return Category(i);
    return std::nullopt;
}

bool is_table_structure(Category c) {
    return c == Category::TableCell || c == Category::TableHeaderCell ||
           c == Category::TableHeader || c == Category::TableRow || c == Category::TableColumn;
}

std::string_view provenance_name(Provenance p) { return kProvenanceNames[int(p)]; }

std::optional<Provenance> provenance_from_name(std::string_view name) {
    for (int i = 0; i < 6; ++i)
        if (kProvenanceNames[i] == name) return Provenance(i);
    return std::nullopt;
}

}  // namespace dh::docx
