#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "dh/core/image.hpp"

namespace dh::test {

// Brute-force band-coverage oracle for table rows/columns: candidate bands at
// every distinct cell edge, membership decided by pixel-wise coverage checks.
struct OracleGrid {
    std::vector<std::vector<int>> rows, cols;
};

inline OracleGrid oracle_grid(const std::vector<Rect>& cells_in) {
    std::vector<Rect> cells = cells_in;
    std::sort(cells.begin(), cells.end(),
              [](const Rect& a, const Rect& b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    OracleGrid oracle;
    if (cells.empty()) return oracle;
    int hmin = cells[0].h, wmin = cells[0].w;
    for (const auto& c : cells) {
        hmin = std::min(hmin, c.h);
        wmin = std::min(wmin, c.w);
    }
    std::vector<int> tops, lefts;
    for (const auto& c : cells) tops.push_back(c.y);
    for (const auto& c : cells) lefts.push_back(c.x);
    std::sort(tops.begin(), tops.end());
    tops.erase(std::unique(tops.begin(), tops.end()), tops.end());
    std::sort(lefts.begin(), lefts.end());
    lefts.erase(std::unique(lefts.begin(), lefts.end()), lefts.end());
    for (int y : tops) {
        std::vector<int> members;
        for (int i = 0; i < int(cells.size()); ++i) {
            bool covers = true;
            for (int yy = y; yy < y + hmin; ++yy)
                covers = covers && yy >= cells[std::size_t(i)].y &&
                         yy < cells[std::size_t(i)].bottom();
            if (covers) members.push_back(i);
        }
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(), [&](int a, int b) {
            return cells[std::size_t(a)].x < cells[std::size_t(b)].x;
        });
        oracle.rows.push_back(members);
    }
    for (int x : lefts) {
        std::vector<int> members;
        for (int i = 0; i < int(cells.size()); ++i) {
            bool covers = true;
            for (int xx = x; xx < x + wmin; ++xx)
                covers = covers && xx >= cells[std::size_t(i)].x &&
                         xx < cells[std::size_t(i)].right();
            if (covers) members.push_back(i);
        }
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(), [&](int a, int b) {
            return cells[std::size_t(a)].y < cells[std::size_t(b)].y;
        });
        oracle.cols.push_back(members);
    }
    return oracle;
}

// Grid-aligned random table with rectangular merges (cell rectangles only).
inline std::vector<Rect> random_merged_table(std::mt19937_64& rng, int max_dim = 6) {
    int rows = 1 + int(rng() % std::uint64_t(max_dim));
    int cols = 1 + int(rng() % std::uint64_t(max_dim));
    const int cell_w = 40, cell_h = 24, gap = 6;
    std::vector<std::vector<bool>> taken(static_cast<std::size_t>(rows),
                                         std::vector<bool>(static_cast<std::size_t>(cols)));
    std::vector<Rect> cells;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (taken[std::size_t(r)][std::size_t(c)]) continue;
            int rs = 1, cs = 1;
            if (rng() % 3 == 0) rs = 1 + int(rng() % std::uint64_t(rows - r));
            if (rng() % 3 == 0) {
                cs = 1 + int(rng() % std::uint64_t(cols - c));
                for (int cc = c; cc < c + cs; ++cc)
                    if (taken[std::size_t(r)][std::size_t(cc)]) cs = std::max(1, cc - c);
            }
            bool clear = true;
            for (int rr = r; rr < r + rs && clear; ++rr)
                for (int cc = c; cc < c + cs && clear; ++cc)
                    clear = !taken[std::size_t(rr)][std::size_t(cc)];
            if (!clear) {
                rs = 1;
                cs = 1;
            }
            for (int rr = r; rr < r + rs; ++rr)
                for (int cc = c; cc < c + cs; ++cc) taken[std::size_t(rr)][std::size_t(cc)] = true;
            cells.push_back(Rect{c * (cell_w + gap), r * (cell_h + gap),
                                 cs * cell_w + (cs - 1) * gap, rs * cell_h + (rs - 1) * gap});
        }
    }
    return cells;
}

}  // namespace dh::test
