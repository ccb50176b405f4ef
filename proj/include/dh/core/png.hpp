#pragma once

#include <optional>

#include "dh/core/bytes.hpp"
#include "dh/core/image.hpp"

namespace dh {

// Lossless codec for the subset this pipeline emits and consumes:
// 8-bit RGB / RGBA (alpha dropped on decode), non-interlaced.
Bytes encode_png(const Image& img, int compression_level = 1);
Image decode_png(BytesView data);  // throws PngError

struct ImageDims {
    int width = 0;
    int height = 0;
};

// Reads dimensions from image headers without decoding pixel data.
// Understands PNG, JPEG, GIF and BMP; nullopt for anything else.
std::optional<ImageDims> probe_image_dims(BytesView data);

}  // namespace dh
