#include "dh/annotate/table_grid.hpp"

#include <algorithm>
#include <limits>

namespace dh::annotate {

TableGrid derive_table_grid(const Rect& table_box, std::vector<Rect> cell_boxes) {
    TableGrid grid;
    grid.table_box = table_box;
    // Cells ordered top-to-bottom, then left-to-right.
    std::sort(cell_boxes.begin(), cell_boxes.end(), [](const Rect& a, const Rect& b) {
        return std::tie(a.y, a.x) < std::tie(b.y, b.x);
    });
    grid.cell_boxes = std::move(cell_boxes);
    if (grid.cell_boxes.empty()) return grid;

    int min_h = std::numeric_limits<int>::max();
    int min_w = std::numeric_limits<int>::max();
    for (const auto& c : grid.cell_boxes) {
        min_h = std::min(min_h, c.h);
        min_w = std::min(min_w, c.w);
    }

    // Rows: one band of the smallest cell height per distinct cell top.
    std::vector<int> tops;
    for (const auto& c : grid.cell_boxes) tops.push_back(c.y);
    std::sort(tops.begin(), tops.end());
    tops.erase(std::unique(tops.begin(), tops.end()), tops.end());
    for (int y : tops) {
        const int band_bottom = y + min_h;
        std::vector<int> members;
        for (int i = 0; i < int(grid.cell_boxes.size()); ++i) {
            const Rect& c = grid.cell_boxes[std::size_t(i)];
            if (c.y <= y && c.bottom() >= band_bottom) members.push_back(i);
        }
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(), [&](int a, int b) {
            return grid.cell_boxes[std::size_t(a)].x < grid.cell_boxes[std::size_t(b)].x;
        });
        int x0 = std::numeric_limits<int>::max(), x1 = std::numeric_limits<int>::min();
        for (int i : members) {
            x0 = std::min(x0, grid.cell_boxes[std::size_t(i)].x);
            x1 = std::max(x1, grid.cell_boxes[std::size_t(i)].right());
        }
        grid.row_boxes.push_back(Rect{x0, y, x1 - x0, min_h});
        grid.row_members.push_back(std::move(members));
    }

    // Columns: analogous with the smallest cell width per distinct left edge.
    std::vector<int> lefts;
    for (const auto& c : grid.cell_boxes) lefts.push_back(c.x);
    std::sort(lefts.begin(), lefts.end());
    lefts.erase(std::unique(lefts.begin(), lefts.end()), lefts.end());
    for (int x : lefts) {
        const int band_right = x + min_w;
        std::vector<int> members;
        for (int i = 0; i < int(grid.cell_boxes.size()); ++i) {
            const Rect& c = grid.cell_boxes[std::size_t(i)];
            if (c.x <= x && c.right() >= band_right) members.push_back(i);
        }
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(), [&](int a, int b) {
            return grid.cell_boxes[std::size_t(a)].y < grid.cell_boxes[std::size_t(b)].y;
        });
        int y0 = std::numeric_limits<int>::max(), y1 = std::numeric_limits<int>::min();
        for (int i : members) {
            y0 = std::min(y0, grid.cell_boxes[std::size_t(i)].y);
            y1 = std::max(y1, grid.cell_boxes[std::size_t(i)].bottom());
        }
        grid.col_boxes.push_back(Rect{x, y0, min_w, y1 - y0});
        grid.col_members.push_back(std::move(members));
    }
    return grid;
}

}  // namespace dh::annotate
