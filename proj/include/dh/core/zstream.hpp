#pragma once

#include <functional>
#include <optional>

#include "dh/core/bytes.hpp"

namespace dh {

// Raw DEFLATE (zip entry payloads).
Bytes inflate_raw(BytesView data, std::uint64_t expected_size);
Bytes deflate_raw(BytesView data, int level = 6);

// zlib-wrapped stream (PNG IDAT).
Bytes inflate_zlib(BytesView data);
Bytes deflate_zlib(BytesView data, int level = 6);

struct GzipResult {
    Bytes data;
    // Set when the final gzip member was cut short; data holds everything
    // decoded before the truncation point.
    bool truncated = false;
    std::size_t members = 0;
};

// Decodes a stream of concatenated gzip members. A corrupt or truncated
// trailing member sets `truncated` instead of throwing; corruption before any
// complete member yields an empty result with truncated=true.
GzipResult gunzip_members(BytesView data);

Bytes gzip_compress(BytesView data, int level = 6);

}  // namespace dh
