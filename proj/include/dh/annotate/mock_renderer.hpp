#pragma once

#include <optional>

#include "dh/annotate/renderer.hpp"
#include "dh/docx/model.hpp"

namespace dh::annotate {

struct WordBox {
    std::string text;
    Rect box;  // page pixels
};

struct LayoutItem {
    int element_ordinal = 0;  // index into the extraction-order element list
    int page = 0;
    Rect rect;                      // page pixels
    std::optional<Rgb> fill;        // shading color found in the XML, if any
    std::vector<WordBox> words;
    docx::SourceKind source = docx::SourceKind::BodyParagraph;
};

struct DocLayout {
    int page_width = 0;
    int page_height = 0;
    int page_count = 0;
    std::vector<LayoutItem> items;
};

// Deterministic renderer: lays the document out with fixed metrics, fills
// each element's rectangle with the shading color the XML carries, and emits
// a real PDF whose text operators match the word boxes. layout() exposes the
// geometry so tests can use it as ground truth.
class MockRenderer final : public Renderer {
public:
    RenderResult render(const Bytes& container_bytes, const RenderOptions& options) override;
    DocLayout layout(const Bytes& container_bytes, const RenderOptions& options);
};

// Fixed page metrics shared by the layout, the PDF writer and the tests.
struct PageMetrics {
    explicit PageMetrics(int dpi);
    int dpi;
    int page_w, page_h;       // px
    int margin;               // px
    int content_w;            // px
    int line_h, char_w, pad, gap;
    double font_pt;           // chosen so one glyph advance is exactly char_w px
    int word_h, ascent_px;
    int px(double pt) const;
};

}  // namespace dh::annotate
