#pragma once

#include "dh/annotate/color_map.hpp"
#include "dh/docx/model.hpp"

namespace dh::annotate {

struct ColorizeResult {
    Bytes container_bytes;
    std::size_t edited = 0;
    std::size_t failed = 0;  // XmlEditFailure: element skipped, counted
};

// Rewrites the container so every classified element renders in its category
// color: highlighting stripped, then run/paragraph shading and font color set;
// image parts become solid-color images of identical dimensions and format.
// The edits never touch spatial properties, so layout is unchanged.
ColorizeResult colorize(const docx::Container& container, const docx::DocumentModel& model,
                        const ColorMap& colors);

// Solid replacement preserving dimensions and format. Supports PNG and BMP;
// nullopt for formats without an encoder here.
std::optional<Bytes> solid_image_like(BytesView original, Rgb color);

}  // namespace dh::annotate
