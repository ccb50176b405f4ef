#pragma once

#include <vector>

#include "dh/core/image.hpp"

namespace dh::annotate {

// Rows and columns derived from detected cell boxes at the finest granularity:
// the smallest cell height fixes the row band, the smallest cell width the
// column band. A merged cell belongs to every band it covers.
struct TableGrid {
    Rect table_box;
    std::vector<Rect> cell_boxes;
    std::vector<Rect> row_boxes;
    std::vector<Rect> col_boxes;
    std::vector<std::vector<int>> row_members;  // per row, left-to-right cell indices
    std::vector<std::vector<int>> col_members;  // per column, top-to-bottom cell indices
};

TableGrid derive_table_grid(const Rect& table_box, std::vector<Rect> cell_boxes);

}  // namespace dh::annotate
