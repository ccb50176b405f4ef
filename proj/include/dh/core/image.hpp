#pragma once

#include <cstdint>
#include <vector>

#include "dh/core/bytes.hpp"

namespace dh {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

struct Rect {
    int x = 0, y = 0, w = 0, h = 0;
    bool operator==(const Rect&) const = default;
    int right() const { return x + w; }
    int bottom() const { return y + h; }
    long long area() const { return static_cast<long long>(w) * h; }
};

double rect_iou(const Rect& a, const Rect& b);

// 8-bit RGB raster, row-major.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = {255, 255, 255});

    int width() const { return width_; }
    int height() const { return height_; }

    Rgb at(int x, int y) const {
        const std::uint8_t* p = data_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
        return {p[0], p[1], p[2]};
    }
    void set(int x, int y, Rgb c) {
        std::uint8_t* p = data_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
        p[0] = c.r; p[1] = c.g; p[2] = c.b;
    }

    void fill_rect(const Rect& r, Rgb c);

    const std::vector<std::uint8_t>& pixels() const { return data_; }
    std::vector<std::uint8_t>& pixels() { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

}  // namespace dh
