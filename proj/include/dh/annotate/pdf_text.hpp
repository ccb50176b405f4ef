#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dh/core/bytes.hpp"
#include "dh/core/image.hpp"

namespace dh::annotate {

struct PageWord {
    std::string text;
    Rect box;  // page pixels at the supplied dpi
};

struct PageTextResult {
    std::string page_text;          // lines top-to-bottom, words left-to-right
    std::vector<PageWord> words;
    bool unsupported_feature = false;  // flag recorded, page still emitted
};

// Extracts text and word boxes for one page of the intermediate PDF.
// Supported subset: classic xref, deflate-compressed content streams, simple
// fonts with /Widths, and the Tj/TJ/Td/TD/Tm/T* text operators. Anything else
// degrades to an empty page with unsupported_feature set.
PageTextResult extract_page_text(BytesView pdf, int page_index, int dpi);

int pdf_page_count(BytesView pdf);  // 0 when unparsable

// Glyph-to-word grouping rule, exposed for tests: glyphs on one baseline are
// joined while the horizontal gap is below a quarter of the average glyph
// width.
struct Glyph {
    std::string text;
    double x = 0, y = 0;      // pt, baseline origin
    double width = 0;         // pt
    double font_size = 0;     // pt
};

std::vector<PageWord> group_glyphs_into_words(std::vector<Glyph> glyphs, double page_height_pt,
                                              int dpi);

}  // namespace dh::annotate
