#include "dh/core/zip.hpp"

#include <zlib.h>

#include <cstring>

#include "dh/core/error.hpp"
#include "dh/core/zstream.hpp"

namespace dh::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEocdSig = 0x06054b50;

std::uint16_t rd16(const Bytes& b, std::size_t off) {
    return std::uint16_t(b[off]) | std::uint16_t(b[off + 1]) << 8;
}

std::uint32_t rd32(const Bytes& b, std::size_t off) {
    return std::uint32_t(b[off]) | std::uint32_t(b[off + 1]) << 8 |
           std::uint32_t(b[off + 2]) << 16 | std::uint32_t(b[off + 3]) << 24;
}

void wr16(Bytes& b, std::uint16_t v) {
    b.push_back(std::uint8_t(v));
    b.push_back(std::uint8_t(v >> 8));
}

void wr32(Bytes& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(std::uint8_t(v >> (8 * i)));
}

}  // namespace

Reader Reader::open(Bytes data) {
    Reader r;
    r.data_ = std::move(data);
    const Bytes& b = r.data_;
    if (b.size() < 22) throw ZipError("archive too small");
    // EOCD: scan backwards over a possible trailing comment.
    std::size_t eocd = std::string::npos;
    std::size_t search_floor = b.size() >= 22 + 65535 ? b.size() - 22 - 65535 : 0;
    for (std::size_t i = b.size() - 22; ; --i) {
        if (rd32(b, i) == kEocdSig) {
            eocd = i;
            break;
        }
        if (i == search_floor) break;
    }
    if (eocd == std::string::npos) throw ZipError("end of central directory not found");
    std::uint16_t entry_count = rd16(b, eocd + 10);
    std::uint32_t cd_size = rd32(b, eocd + 12);
    std::uint32_t cd_offset = rd32(b, eocd + 16);
    if (std::uint64_t(cd_offset) + cd_size > b.size()) throw ZipError("central directory out of range");

    std::size_t pos = cd_offset;
    r.entries_.reserve(entry_count);
    for (std::uint16_t i = 0; i < entry_count; ++i) {
        if (pos + 46 > b.size() || rd32(b, pos) != kCentralSig)
            throw ZipError("bad central directory entry");
        EntryInfo e;
        e.method = rd16(b, pos + 10);
        e.crc32 = rd32(b, pos + 16);
        e.compressed_size = rd32(b, pos + 20);
        e.uncompressed_size = rd32(b, pos + 24);
        std::uint16_t name_len = rd16(b, pos + 28);
        std::uint16_t extra_len = rd16(b, pos + 30);
        std::uint16_t comment_len = rd16(b, pos + 32);
        e.local_header_offset = rd32(b, pos + 42);
        if (pos + 46 + name_len > b.size()) throw ZipError("truncated entry name");
        e.name.assign(reinterpret_cast<const char*>(b.data()) + pos + 46, name_len);
        r.entries_.push_back(std::move(e));
        pos += 46 + name_len + extra_len + comment_len;
    }
    return r;
}

std::optional<std::size_t> Reader::find(std::string_view name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].name == name) return i;
    return std::nullopt;
}

Bytes Reader::read(std::size_t index) const {
    const EntryInfo& e = entries_.at(index);
    const Bytes& b = data_;
    std::size_t pos = e.local_header_offset;
    if (pos + 30 > b.size() || rd32(b, pos) != kLocalSig) throw ZipError("bad local header");
    std::uint16_t name_len = rd16(b, pos + 26);
    std::uint16_t extra_len = rd16(b, pos + 28);
    std::size_t data_off = pos + 30 + name_len + extra_len;
    if (data_off + e.compressed_size > b.size()) throw ZipError("entry data out of range");
    BytesView payload(b.data() + data_off, e.compressed_size);
    Bytes content;
    if (e.method == 0) {
        content.assign(payload.begin(), payload.end());
    } else if (e.method == 8) {
        content = inflate_raw(payload, e.uncompressed_size);
    } else {
        throw ZipError("unsupported compression method " + std::to_string(e.method));
    }
    std::uint32_t crc = ::crc32(0, content.data(), static_cast<uInt>(content.size()));
    if (crc != e.crc32) throw ZipError("crc mismatch for " + e.name);
    return content;
}

Bytes Reader::read(std::string_view name) const {
    auto idx = find(name);
    if (!idx) throw ZipError("no such entry: " + std::string(name));
    return read(*idx);
}

std::uint64_t Reader::total_uncompressed() const {
    std::uint64_t sum = 0;
    for (const auto& e : entries_) sum += e.uncompressed_size;
    return sum;
}

void Writer::add(std::string name, BytesView content, bool compress) {
    EntryInfo e;
    e.name = std::move(name);
    e.local_header_offset = out_.size();
    e.uncompressed_size = content.size();
    e.crc32 = ::crc32(0, content.data(), static_cast<uInt>(content.size()));
    Bytes packed;
    if (compress) {
        packed = deflate_raw(content);
        if (packed.size() < content.size()) {
            e.method = 8;
        } else {
            packed.clear();
        }
    }
    if (e.method == 0) packed.assign(content.begin(), content.end());
    e.compressed_size = packed.size();

    wr32(out_, kLocalSig);
    wr16(out_, 20);      // version needed
    wr16(out_, 0);       // flags
    wr16(out_, e.method);
    wr16(out_, 0);       // mod time
    wr16(out_, 0x21);    // mod date (1980-01-01)
    wr32(out_, e.crc32);
    wr32(out_, std::uint32_t(e.compressed_size));
    wr32(out_, std::uint32_t(e.uncompressed_size));
    wr16(out_, std::uint16_t(e.name.size()));
    wr16(out_, 0);       // extra len
    out_.insert(out_.end(), e.name.begin(), e.name.end());
    out_.insert(out_.end(), packed.begin(), packed.end());
    done_.push_back({std::move(e)});
}

void Writer::add(std::string name, std::string_view content, bool compress) {
    add(std::move(name),
        BytesView(reinterpret_cast<const std::uint8_t*>(content.data()), content.size()),
        compress);
}

Bytes Writer::finish() {
    std::uint32_t cd_offset = std::uint32_t(out_.size());
    for (const auto& p : done_) {
        const EntryInfo& e = p.info;
        wr32(out_, kCentralSig);
        wr16(out_, 20);  // made by
        wr16(out_, 20);  // needed
        wr16(out_, 0);
        wr16(out_, e.method);
        wr16(out_, 0);
        wr16(out_, 0x21);
        wr32(out_, e.crc32);
        wr32(out_, std::uint32_t(e.compressed_size));
        wr32(out_, std::uint32_t(e.uncompressed_size));
        wr16(out_, std::uint16_t(e.name.size()));
        wr16(out_, 0);
        wr16(out_, 0);
        wr16(out_, 0);
        wr16(out_, 0);
        wr32(out_, 0);
        wr32(out_, std::uint32_t(e.local_header_offset));
        out_.insert(out_.end(), e.name.begin(), e.name.end());
    }
    std::uint32_t cd_size = std::uint32_t(out_.size()) - cd_offset;
    wr32(out_, kEocdSig);
    wr16(out_, 0);
    wr16(out_, 0);
    wr16(out_, std::uint16_t(done_.size()));
    wr16(out_, std::uint16_t(done_.size()));
    wr32(out_, cd_size);
    wr32(out_, cd_offset);
    wr16(out_, 0);
    Bytes result = std::move(out_);
    out_.clear();
    done_.clear();
    return result;
}

}  // namespace dh::zip
