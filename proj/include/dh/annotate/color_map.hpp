#pragma once

#include <optional>
#include <string>

#include "dh/core/image.hpp"
#include "dh/docx/category.hpp"

namespace dh::annotate {

// Fixed category -> RGB assignment. All 30 colors sit on the {0,85,170,255}
// channel lattice (minus white and black), so any two distinct colors are at
// least 85 apart in channel L-infinity distance and the +-tolerance windows
// used for detection can never overlap.
class ColorMap {
public:
    static constexpr int kMinChannelSeparation = 32;

    ColorMap();  // default palette

    Rgb color_of(docx::Category c) const { return colors_[std::size_t(c)]; }
    std::string hex_of(docx::Category c) const;  // "RRGGBB"

    std::optional<docx::Category> category_of(Rgb px, int tolerance) const;

    void set_color(docx::Category c, Rgb color) { colors_[std::size_t(c)] = color; }

    // Injective and pairwise separation >= kMinChannelSeparation.
    bool valid() const;

private:
    std::array<Rgb, docx::kCategoryCount> colors_;
};

}  // namespace dh::annotate
