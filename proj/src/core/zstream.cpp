#include "dh/core/zstream.hpp"

#include <zlib.h>

#include <cstring>

#include "dh/core/error.hpp"

namespace dh {

namespace {

// window_bits: -15 raw deflate, 15 zlib, 15+16 gzip.
Bytes inflate_with(BytesView data, int window_bits, std::uint64_t size_hint) {
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit2(&zs, window_bits) != Z_OK) throw Error("inflateInit failed");
    Bytes out;
    out.reserve(size_hint > 0 ? size_hint : data.size() * 3);
    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    std::uint8_t chunk[1 << 16];
    int rc = Z_OK;
    do {
        zs.next_out = chunk;
        zs.avail_out = sizeof(chunk);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
            inflateEnd(&zs);
            throw Error("inflate failed: " + std::string(zs.msg ? zs.msg : "corrupt stream"));
        }
        out.insert(out.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
        if (rc == Z_BUF_ERROR && zs.avail_in == 0) {
            inflateEnd(&zs);
            throw Error("inflate failed: truncated stream");
        }
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

Bytes deflate_with(BytesView data, int window_bits, int level) {
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (deflateInit2(&zs, level, Z_DEFLATED, window_bits, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw Error("deflateInit failed");
    Bytes out;
    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    std::uint8_t chunk[1 << 16];
    int rc = Z_OK;
    do {
        zs.next_out = chunk;
        zs.avail_out = sizeof(chunk);
        rc = deflate(&zs, Z_FINISH);
        out.insert(out.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
    } while (rc != Z_STREAM_END);
    deflateEnd(&zs);
    return out;
}

}  // namespace

Bytes inflate_raw(BytesView data, std::uint64_t expected_size) {
    return inflate_with(data, -15, expected_size);
}

Bytes deflate_raw(BytesView data, int level) { return deflate_with(data, -15, level); }

Bytes inflate_zlib(BytesView data) { return inflate_with(data, 15, 0); }

Bytes deflate_zlib(BytesView data, int level) { return deflate_with(data, 15, level); }

GzipResult gunzip_members(BytesView data) {
    GzipResult result;
    if (data.empty()) return result;  // vacuously complete
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw Error("inflateInit failed");
    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    std::uint8_t chunk[1 << 16];
    Bytes member;
    for (;;) {
        zs.next_out = chunk;
        zs.avail_out = sizeof(chunk);
        int rc = inflate(&zs, Z_NO_FLUSH);
        member.insert(member.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
        if (rc == Z_STREAM_END) {
            result.data.insert(result.data.end(), member.begin(), member.end());
            member.clear();
            ++result.members;
            if (zs.avail_in == 0) break;
            if (inflateReset(&zs) != Z_OK) {
                result.truncated = true;
                break;
            }
            continue;
        }
        if (rc == Z_OK && zs.avail_in > 0) continue;
        // Ran out of input mid-member, or the stream is corrupt: keep whatever
        // decoded cleanly, including the partial tail.
        result.data.insert(result.data.end(), member.begin(), member.end());
        result.truncated = true;
        break;
    }
    inflateEnd(&zs);
    return result;
}

Bytes gzip_compress(BytesView data, int level) { return deflate_with(data, 15 + 16, level); }

}  // namespace dh
