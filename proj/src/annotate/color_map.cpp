#include "dh/annotate/color_map.hpp"

#include <cmath>
#include <cstdio>

namespace dh::annotate {

namespace {

constexpr Rgb kPalette[docx::kCategoryCount] = {
    {255, 0, 0},      // Title
    {0, 170, 0},      // Heading1
    {0, 0, 255},      // Heading2
    {255, 170, 0},    // Heading3
    {170, 0, 255},    // Heading4
    {0, 170, 255},    // Heading5
    {255, 0, 170},    // Heading6
    {170, 255, 0},    // Heading7
    {0, 255, 170},    // Heading8
    {170, 0, 0},      // Heading9
    {0, 85, 0},       // PlainText
    {0, 0, 170},      // ListItem
    {170, 170, 0},    // Header
    {170, 0, 170},    // Footer
    {0, 170, 170},    // TableHeader
    {255, 85, 85},    // TableHeaderCell
    {85, 255, 85},    // Table
    {85, 85, 255},    // TableCell
    {255, 255, 85},   // TableOfContents
    {255, 85, 255},   // Bibliography
    {85, 255, 255},   // Quote
    {170, 85, 0},     // Equation
    {85, 0, 170},     // Figure
    {0, 85, 170},     // TableCaption
    {85, 170, 0},     // Footnote
    {170, 0, 85},     // Annotation
    {0, 255, 85},     // FormField
    {85, 0, 85},      // FormTag
    {255, 170, 170},  // TableRow
    {170, 255, 255},  // TableColumn
};

int linf(Rgb a, Rgb b) {
    int dr = std::abs(int(a.r) - int(b.r));
    int dg = std::abs(int(a.g) - int(b.g));
    int db = std::abs(int(a.b) - int(b.b));
    return std::max(dr, std::max(dg, db));
}

}  // namespace

ColorMap::ColorMap() {
    for (int i = 0; i < docx::kCategoryCount; ++i) colors_[std::size_t(i)] = kPalette[i];
}

std::string ColorMap::hex_of(docx::Category c) const {
    Rgb color = color_of(c);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02X%02X%02X", color.r, color.g, color.b);
    return buf;
}

std::optional<docx::Category> ColorMap::category_of(Rgb px, int tolerance) const {
    for (int i = 0; i < docx::kCategoryCount; ++i) {
        if (linf(px, colors_[std::size_t(i)]) <= tolerance) return docx::Category(i);
    }
    return std::nullopt;
}

bool ColorMap::valid() const {
    for (int i = 0; i < docx::kCategoryCount; ++i)
        for (int j = i + 1; j < docx::kCategoryCount; ++j)
            if (linf(colors_[std::size_t(i)], colors_[std::size_t(j)]) < kMinChannelSeparation)
                return false;
    return true;
}

}  // namespace dh::annotate
