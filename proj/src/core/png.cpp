#include "dh/core/png.hpp"

#include <zlib.h>

#include <cstring>

#include "dh/core/error.hpp"
#include "dh/core/zstream.hpp"

namespace dh {

namespace {

const std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void wr32be(Bytes& b, std::uint32_t v) {
    b.push_back(std::uint8_t(v >> 24));
    b.push_back(std::uint8_t(v >> 16));
    b.push_back(std::uint8_t(v >> 8));
    b.push_back(std::uint8_t(v));
}

std::uint32_t rd32be(BytesView b, std::size_t off) {
    return std::uint32_t(b[off]) << 24 | std::uint32_t(b[off + 1]) << 16 |
           std::uint32_t(b[off + 2]) << 8 | std::uint32_t(b[off + 3]);
}

void append_chunk(Bytes& out, const char type[4], BytesView payload) {
    wr32be(out, std::uint32_t(payload.size()));
    std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    std::uint32_t crc = ::crc32(0, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
    wr32be(out, crc);
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

}  // namespace

Bytes encode_png(const Image& img, int compression_level) {
    const int w = img.width(), h = img.height();
    Bytes raw;
    raw.reserve(static_cast<std::size_t>(h) * (1 + 3 * w));
    const auto& px = img.pixels();
    for (int y = 0; y < h; ++y) {
        raw.push_back(0);  // filter: none
        const std::uint8_t* row = px.data() + static_cast<std::size_t>(y) * w * 3;
        raw.insert(raw.end(), row, row + static_cast<std::size_t>(w) * 3);
    }
    Bytes idat = deflate_zlib(raw, compression_level);

    Bytes out(kPngSig, kPngSig + 8);
    Bytes ihdr;
    wr32be(ihdr, std::uint32_t(w));
    wr32be(ihdr, std::uint32_t(h));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type: truecolor
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", idat);
    append_chunk(out, "IEND", {});
    return out;
}

Image decode_png(BytesView data) {
    if (data.size() < 8 || std::memcmp(data.data(), kPngSig, 8) != 0)
        throw PngError("not a PNG");
    std::size_t pos = 8;
    int w = 0, h = 0, bit_depth = 0, color_type = 0, interlace = 0;
    Bytes idat;
    bool seen_ihdr = false;
    while (pos + 8 <= data.size()) {
        std::uint32_t len = rd32be(data, pos);
        if (pos + 12 + len > data.size()) throw PngError("truncated chunk");
        std::string_view type(reinterpret_cast<const char*>(data.data()) + pos + 4, 4);
        BytesView payload(data.data() + pos + 8, len);
        if (type == "IHDR") {
            if (len < 13) throw PngError("bad IHDR");
            w = int(rd32be(payload, 0));
            h = int(rd32be(payload, 4));
            bit_depth = payload[8];
            color_type = payload[9];
            interlace = payload[12];
            seen_ihdr = true;
        } else if (type == "IDAT") {
            idat.insert(idat.end(), payload.begin(), payload.end());
        } else if (type == "IEND") {
            break;
        }
        pos += 12 + len;
    }
    if (!seen_ihdr || w <= 0 || h <= 0) throw PngError("missing IHDR");
    if (bit_depth != 8 || (color_type != 2 && color_type != 6) || interlace != 0)
        throw PngError("unsupported PNG variant");
    const int channels = color_type == 2 ? 3 : 4;
    Bytes raw = inflate_zlib(idat);
    const std::size_t stride = static_cast<std::size_t>(w) * channels;
    if (raw.size() < (stride + 1) * h) throw PngError("pixel data too short");

    Image img(w, h);
    std::vector<std::uint8_t> prev(stride, 0), cur(stride);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        std::uint8_t filter = src[0];
        const std::uint8_t* line = src + 1;
        for (std::size_t i = 0; i < stride; ++i) {
            int a = i >= std::size_t(channels) ? cur[i - channels] : 0;
            int b = prev[i];
            int c = i >= std::size_t(channels) ? prev[i - channels] : 0;
            int x = line[i];
            int v;
            switch (filter) {
                case 0: v = x; break;
                case 1: v = x + a; break;
                case 2: v = x + b; break;
                case 3: v = x + (a + b) / 2; break;
                case 4: v = x + paeth(a, b, c); break;
                default: throw PngError("bad filter type");
            }
            cur[i] = std::uint8_t(v);
        }
        for (int x = 0; x < w; ++x)
            img.set(x, y, {cur[std::size_t(x) * channels], cur[std::size_t(x) * channels + 1],
                           cur[std::size_t(x) * channels + 2]});
        std::swap(prev, cur);
    }
    return img;
}

std::optional<ImageDims> probe_image_dims(BytesView d) {
    // PNG
    if (d.size() >= 24 && std::memcmp(d.data(), kPngSig, 8) == 0) {
        return ImageDims{int(rd32be(d, 16)), int(rd32be(d, 20))};
    }
    // GIF87a / GIF89a: little-endian logical screen size
    if (d.size() >= 10 && d[0] == 'G' && d[1] == 'I' && d[2] == 'F') {
        return ImageDims{d[6] | d[7] << 8, d[8] | d[9] << 8};
    }
    // BMP
    if (d.size() >= 26 && d[0] == 'B' && d[1] == 'M') {
        std::int32_t w = std::int32_t(d[18] | d[19] << 8 | d[20] << 16 | std::uint32_t(d[21]) << 24);
        std::int32_t h = std::int32_t(d[22] | d[23] << 8 | d[24] << 16 | std::uint32_t(d[25]) << 24);
        return ImageDims{int(w), int(h < 0 ? -h : h)};
    }
    // JPEG: scan markers for a SOF segment
    if (d.size() >= 4 && d[0] == 0xff && d[1] == 0xd8) {
        std::size_t pos = 2;
        while (pos + 4 <= d.size()) {
            if (d[pos] != 0xff) {
                ++pos;
                continue;
            }
            std::uint8_t marker = d[pos + 1];
            if (marker == 0xd8 || (marker >= 0xd0 && marker <= 0xd9)) {
                pos += 2;
                continue;
            }
            if (pos + 4 > d.size()) break;
            std::size_t seg_len = std::size_t(d[pos + 2]) << 8 | d[pos + 3];
            bool is_sof = (marker >= 0xc0 && marker <= 0xcf) && marker != 0xc4 &&
                          marker != 0xc8 && marker != 0xcc;
            if (is_sof) {
                if (pos + 9 > d.size()) break;
                int h = int(d[pos + 5]) << 8 | d[pos + 6];
                int w = int(d[pos + 7]) << 8 | d[pos + 8];
                return ImageDims{w, h};
            }
            pos += 2 + seg_len;
        }
    }
    return std::nullopt;
}

}  // namespace dh
