#include "dh/annotate/detect.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <unordered_map>

namespace dh::annotate {

namespace {

struct Component {
    int min_x, min_y, max_x, max_y;
    long long area;
};

bool boxes_should_merge(const Rect& a, const Rect& b, int merge_gap) {
    // Vertical separation below the gap (overlap counts) plus any horizontal
    // overlap.
    int vertical_gap = std::max(a.y, b.y) - std::min(a.bottom(), b.bottom());
    if (vertical_gap >= merge_gap) return false;
    int overlap = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    return overlap > 0;
}

// Merge boxes of one category to a fixpoint.
void merge_category_boxes(std::vector<Rect>& boxes, int merge_gap) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < boxes.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < boxes.size(); ++j) {
                if (boxes_should_merge(boxes[i], boxes[j], merge_gap)) {
                    int x0 = std::min(boxes[i].x, boxes[j].x);
                    int y0 = std::min(boxes[i].y, boxes[j].y);
                    int x1 = std::max(boxes[i].right(), boxes[j].right());
                    int y1 = std::max(boxes[i].bottom(), boxes[j].bottom());
                    boxes[i] = Rect{x0, y0, x1 - x0, y1 - y0};
                    boxes.erase(boxes.begin() + std::ptrdiff_t(j));
                    changed = true;
                    break;
                }
            }
        }
    }
}

}  // namespace

void sort_boxes(std::vector<CategoryBox>& boxes) {
    std::sort(boxes.begin(), boxes.end(), [](const CategoryBox& a, const CategoryBox& b) {
        return std::tie(a.category, a.box.y, a.box.x, a.box.w, a.box.h) <
               std::tie(b.category, b.box.y, b.box.x, b.box.w, b.box.h);
    });
}

std::vector<CategoryBox> detect_bboxes(const Image& page, const ColorMap& colors,
                                       const DetectParams& params) {
    const int w = page.width(), h = page.height();
    std::vector<CategoryBox> out;
    if (w <= 0 || h <= 0) return out;

    // Pass 1: per-pixel category labels. Windows never overlap (palette
    // separation), so each pixel maps to at most one category.
    std::vector<std::int8_t> label(std::size_t(w) * std::size_t(h), -1);
    std::array<Rgb, docx::kCategoryCount> palette;
    for (int i = 0; i < docx::kCategoryCount; ++i)
        palette[std::size_t(i)] = colors.color_of(docx::Category(i));
    const unsigned window = unsigned(2 * params.tolerance);
    const int tol = params.tolerance;
    const std::uint8_t* pixels = page.pixels().data();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* row = pixels + std::size_t(y) * std::size_t(w) * 3;
        std::int8_t* out_row = label.data() + std::size_t(y) * std::size_t(w);
        for (int x = 0; x < w; ++x) {
            const int r = row[3 * x], g = row[3 * x + 1], b = row[3 * x + 2];
            for (int i = 0; i < docx::kCategoryCount; ++i) {
                const Rgb c = palette[std::size_t(i)];
                if (unsigned(r - c.r + tol) <= window && unsigned(g - c.g + tol) <= window &&
                    unsigned(b - c.b + tol) <= window) {
                    out_row[x] = std::int8_t(i);
                    break;
                }
            }
        }
    }

    // Pass 2: one union-find sweep over the label plane covers every category
    // at once (labels are disjoint, so a union only ever joins equal labels).
    const std::size_t n = std::size_t(w) * std::size_t(h);
    std::vector<std::int32_t> parent(n, -1);
    auto find_root = [&](std::int32_t i) {
        while (parent[std::size_t(i)] != i) {
            parent[std::size_t(i)] = parent[std::size_t(parent[std::size_t(i)])];
            i = parent[std::size_t(i)];
        }
        return i;
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t idx = std::size_t(y) * std::size_t(w) + std::size_t(x);
            if (label[idx] < 0) continue;
            parent[idx] = std::int32_t(idx);
            if (x > 0 && label[idx - 1] == label[idx]) {
                std::int32_t a = find_root(std::int32_t(idx));
                std::int32_t b = find_root(std::int32_t(idx - 1));
                if (a != b) parent[std::size_t(a)] = b;
            }
            if (y > 0 && label[idx - std::size_t(w)] == label[idx]) {
                std::int32_t a = find_root(std::int32_t(idx));
                std::int32_t b = find_root(std::int32_t(idx - std::size_t(w)));
                if (a != b) parent[std::size_t(a)] = b;
            }
        }
    }

    // Component stats keyed by root.
    std::unordered_map<std::int32_t, Component> components;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t idx = std::size_t(y) * std::size_t(w) + std::size_t(x);
            if (label[idx] < 0) continue;
            std::int32_t root = find_root(std::int32_t(idx));
            auto [it, fresh] = components.try_emplace(root, Component{x, y, x, y, 0});
            Component& comp = it->second;
            ++comp.area;
            comp.min_x = std::min(comp.min_x, x);
            comp.max_x = std::max(comp.max_x, x);
            comp.min_y = std::min(comp.min_y, y);
            comp.max_y = std::max(comp.max_y, y);
        }
    }

    std::vector<std::vector<Rect>> per_category(docx::kCategoryCount);
    for (const auto& [root, comp] : components) {
        if (comp.area < params.min_area) continue;
        int cat = label[std::size_t(root)];
        per_category[std::size_t(cat)].push_back(
            Rect{comp.min_x, comp.min_y, comp.max_x - comp.min_x + 1, comp.max_y - comp.min_y + 1});
    }
    for (int cat = 0; cat < docx::kCategoryCount; ++cat) {
        merge_category_boxes(per_category[std::size_t(cat)], params.merge_gap);
        for (const auto& box : per_category[std::size_t(cat)])
            out.push_back(CategoryBox{docx::Category(cat), box});
    }
    sort_boxes(out);
    return out;
}

std::vector<CategoryBox> detect_bboxes_reference(const Image& page, const ColorMap& colors,
                                                 const DetectParams& params) {
    const int w = page.width(), h = page.height();
    std::vector<CategoryBox> out;
    if (w <= 0 || h <= 0) return out;

    for (int cat = 0; cat < docx::kCategoryCount; ++cat) {
        const Rgb target = colors.color_of(docx::Category(cat));
        auto matches = [&](int x, int y) {
            Rgb px = page.at(x, y);
            return std::abs(int(px.r) - int(target.r)) <= params.tolerance &&
                   std::abs(int(px.g) - int(target.g)) <= params.tolerance &&
                   std::abs(int(px.b) - int(target.b)) <= params.tolerance;
        };
        std::vector<char> visited(std::size_t(w) * std::size_t(h), 0);
        std::vector<Rect> boxes;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                std::size_t idx = std::size_t(y) * std::size_t(w) + std::size_t(x);
                if (visited[idx] || !matches(x, y)) continue;
                // BFS
                std::queue<std::pair<int, int>> queue;
                queue.push({x, y});
                visited[idx] = 1;
                int min_x = x, max_x = x, min_y = y, max_y = y;
                long long area = 0;
                while (!queue.empty()) {
                    auto [cx, cy] = queue.front();
                    queue.pop();
                    ++area;
                    min_x = std::min(min_x, cx);
                    max_x = std::max(max_x, cx);
                    min_y = std::min(min_y, cy);
                    max_y = std::max(max_y, cy);
                    const int dx[4] = {-1, 1, 0, 0};
                    const int dy[4] = {0, 0, -1, 1};
                    for (int k = 0; k < 4; ++k) {
                        int nx2 = cx + dx[k], ny2 = cy + dy[k];
                        if (nx2 < 0 || nx2 >= w || ny2 < 0 || ny2 >= h) continue;
                        std::size_t nidx = std::size_t(ny2) * std::size_t(w) + std::size_t(nx2);
                        if (visited[nidx] || !matches(nx2, ny2)) continue;
                        visited[nidx] = 1;
                        queue.push({nx2, ny2});
                    }
                }
                if (area >= params.min_area)
                    boxes.push_back(Rect{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1});
            }
        }
        // Independent merge formulation for the reference path.
        for (bool merged = true; merged;) {
            merged = false;
            for (std::size_t i = 0; i < boxes.size(); ++i) {
                for (std::size_t j = 0; j < boxes.size(); ++j) {
                    if (i == j) continue;
                    const Rect &a = boxes[i], &b = boxes[j];
                    bool h_overlap = a.x < b.right() && b.x < a.right();
                    int gap = (b.y >= a.bottom()) ? b.y - a.bottom()
                              : (a.y >= b.bottom()) ? a.y - b.bottom()
                                                    : 0;
                    if (h_overlap && gap < params.merge_gap) {
                        Rect u{std::min(a.x, b.x), std::min(a.y, b.y), 0, 0};
                        u.w = std::max(a.right(), b.right()) - u.x;
                        u.h = std::max(a.bottom(), b.bottom()) - u.y;
                        boxes[i] = u;
                        boxes.erase(boxes.begin() + std::ptrdiff_t(j));
                        merged = true;
                        break;
                    }
                }
                if (merged) break;
            }
        }
        for (const auto& box : boxes) out.push_back(CategoryBox{docx::Category(cat), box});
    }
    sort_boxes(out);
    return out;
}

}  // namespace dh::annotate
