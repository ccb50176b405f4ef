#pragma once

#include <vector>

#include "dh/annotate/color_map.hpp"
#include "dh/core/image.hpp"

namespace dh::annotate {

struct DetectParams {
    int tolerance = 8;   // per-channel window around each category color
    int min_area = 16;   // components below this many pixels are dropped
    int merge_gap = 4;   // same-category boxes closer than this vertically merge
};

struct CategoryBox {
    docx::Category category;
    Rect box;
    bool operator==(const CategoryBox&) const = default;
};

// Masks pixels within tolerance of a category color, labels 4-connected
// components, drops small ones, merges vertically adjacent same-category
// boxes. OpenMP-parallel over rows and categories when available.
std::vector<CategoryBox> detect_bboxes(const Image& page, const ColorMap& colors,
                                       const DetectParams& params = {});

// Straightforward serial implementation kept as the testing reference; the
// parallel kernel must agree with it box for box.
std::vector<CategoryBox> detect_bboxes_reference(const Image& page, const ColorMap& colors,
                                                 const DetectParams& params = {});

// Shared output ordering: (category, y, x, w, h).
void sort_boxes(std::vector<CategoryBox>& boxes);

}  // namespace dh::annotate
