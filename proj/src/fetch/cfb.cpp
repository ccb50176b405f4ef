#include "dh/fetch/cfb.hpp"

#include <algorithm>
#include <cctype>

#include "dh/core/error.hpp"
#include "dh/core/utf8.hpp"

namespace dh::fetch {

namespace {

const std::uint8_t kCfbSig[8] = {0xd0, 0xcf, 0x11, 0xe0, 0xa1, 0xb1, 0x1a, 0xe1};

constexpr std::uint32_t kEndOfChain = 0xfffffffe;
constexpr std::uint32_t kFreeSector = 0xffffffff;

std::uint16_t rd16(BytesView b, std::size_t off) {
    return std::uint16_t(b[off]) | std::uint16_t(b[off + 1]) << 8;
}

std::uint32_t rd32(BytesView b, std::size_t off) {
    return std::uint32_t(b[off]) | std::uint32_t(b[off + 1]) << 8 |
           std::uint32_t(b[off + 2]) << 16 | std::uint32_t(b[off + 3]) << 24;
}

std::uint64_t rd64(BytesView b, std::size_t off) {
    return std::uint64_t(rd32(b, off)) | std::uint64_t(rd32(b, off + 4)) << 32;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

bool looks_like_cfb(BytesView data) {
    return data.size() >= 8 && std::equal(kCfbSig, kCfbSig + 8, data.begin());
}

CfbFile CfbFile::parse(BytesView data) {
    if (!looks_like_cfb(data) || data.size() < 512) throw CfbError("not a compound file");
    CfbFile f;
    f.data_.assign(data.begin(), data.end());
    BytesView b(f.data_);

    std::uint16_t sector_shift = rd16(b, 30);
    std::uint16_t mini_shift = rd16(b, 32);
    if (sector_shift != 9 && sector_shift != 12) throw CfbError("bad sector shift");
    f.sector_size_ = 1u << sector_shift;
    f.mini_sector_size_ = 1u << mini_shift;
    std::uint32_t num_fat = rd32(b, 44);
    std::uint32_t first_dir = rd32(b, 48);
    f.mini_cutoff_ = rd32(b, 56);
    std::uint32_t first_minifat = rd32(b, 60);
    std::uint32_t num_minifat = rd32(b, 64);
    std::uint32_t first_difat = rd32(b, 68);
    std::uint32_t num_difat = rd32(b, 72);

    auto sector_off = [&](std::uint32_t sector) -> std::size_t {
        return 512 + std::size_t(sector) * f.sector_size_;
    };
    auto check_sector = [&](std::uint32_t sector) {
        if (sector_off(sector) + f.sector_size_ > f.data_.size())
            throw CfbError("sector out of range");
    };

    // DIFAT: 109 header entries plus chained DIFAT sectors.
    std::vector<std::uint32_t> fat_sectors;
    for (std::uint32_t i = 0; i < 109 && fat_sectors.size() < num_fat; ++i) {
        std::uint32_t s = rd32(b, 76 + i * 4);
        if (s != kFreeSector) fat_sectors.push_back(s);
    }
    std::uint32_t difat = first_difat;
    for (std::uint32_t n = 0; n < num_difat && difat != kEndOfChain && difat != kFreeSector; ++n) {
        check_sector(difat);
        std::size_t off = sector_off(difat);
        std::uint32_t per = f.sector_size_ / 4 - 1;
        for (std::uint32_t i = 0; i < per && fat_sectors.size() < num_fat; ++i) {
            std::uint32_t s = rd32(b, off + i * 4);
            if (s != kFreeSector) fat_sectors.push_back(s);
        }
        difat = rd32(b, off + (f.sector_size_ - 4));
    }

    for (auto s : fat_sectors) {
        check_sector(s);
        std::size_t off = sector_off(s);
        for (std::uint32_t i = 0; i < f.sector_size_ / 4; ++i)
            f.fat_.push_back(rd32(b, off + i * 4));
    }

    // Mini FAT.
    std::uint32_t mf = first_minifat;
    for (std::uint32_t n = 0; n < num_minifat && mf != kEndOfChain && mf != kFreeSector; ++n) {
        check_sector(mf);
        std::size_t off = sector_off(mf);
        for (std::uint32_t i = 0; i < f.sector_size_ / 4; ++i)
            f.mini_fat_.push_back(rd32(b, off + i * 4));
        mf = mf < f.fat_.size() ? f.fat_[mf] : kEndOfChain;
    }

    // Directory.
    Bytes dir;
    std::uint32_t ds = first_dir;
    std::size_t guard = 0;
    while (ds != kEndOfChain && ds != kFreeSector) {
        if (++guard > f.data_.size() / f.sector_size_ + 2) throw CfbError("directory chain loop");
        check_sector(ds);
        dir.insert(dir.end(), f.data_.begin() + sector_off(ds),
                   f.data_.begin() + sector_off(ds) + f.sector_size_);
        ds = ds < f.fat_.size() ? f.fat_[ds] : kEndOfChain;
    }
    for (std::size_t off = 0; off + 128 <= dir.size(); off += 128) {
        BytesView e(dir.data() + off, 128);
        std::uint16_t name_bytes = rd16(e, 64);
        std::uint8_t type = e[66];
        if (type == 0 || name_bytes < 2 || name_bytes > 64) continue;
        std::string name;
        for (std::size_t i = 0; i + 2 <= std::size_t(name_bytes) - 2; i += 2) {
            char32_t cp = rd16(e, i);
            if (cp == 0) break;
            utf8_append(name, cp);
        }
        CfbEntry entry;
        entry.name = std::move(name);
        entry.type = type;
        entry.start_sector = rd32(e, 116);
        entry.size = rd64(e, 120);
        f.entries_.push_back(std::move(entry));
    }

    // Mini stream lives in the root entry's regular chain.
    for (const auto& e : f.entries_) {
        if (e.type == 5) {
            f.mini_stream_ = f.read_chain(e.start_sector, e.size);
            break;
        }
    }
    return f;
}

Bytes CfbFile::read_chain(std::uint32_t start, std::uint64_t size) const {
    Bytes out;
    std::uint32_t s = start;
    std::size_t guard = 0;
    while (s != kEndOfChain && s != kFreeSector && out.size() < size) {
        if (++guard > fat_.size() + 2) throw CfbError("FAT chain loop");
        std::size_t off = 512 + std::size_t(s) * sector_size_;
        if (off + sector_size_ > data_.size()) throw CfbError("chain sector out of range");
        out.insert(out.end(), data_.begin() + off, data_.begin() + off + sector_size_);
        s = s < fat_.size() ? fat_[s] : kEndOfChain;
    }
    if (out.size() > size) out.resize(size);
    return out;
}

Bytes CfbFile::read_mini_chain(std::uint32_t start, std::uint64_t size) const {
    Bytes out;
    std::uint32_t s = start;
    std::size_t guard = 0;
    while (s != kEndOfChain && s != kFreeSector && out.size() < size) {
        if (++guard > mini_fat_.size() + 2) throw CfbError("mini FAT chain loop");
        std::size_t off = std::size_t(s) * mini_sector_size_;
        if (off + mini_sector_size_ > mini_stream_.size())
            throw CfbError("mini sector out of range");
        out.insert(out.end(), mini_stream_.begin() + off,
                   mini_stream_.begin() + off + mini_sector_size_);
        s = s < mini_fat_.size() ? mini_fat_[s] : kEndOfChain;
    }
    if (out.size() > size) out.resize(size);
    return out;
}

bool CfbFile::has_storage(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.type == 1 && iequals(e.name, name)) return true;
    return false;
}

bool CfbFile::has_stream(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.type == 2 && iequals(e.name, name)) return true;
    return false;
}

std::optional<Bytes> CfbFile::read_stream(std::string_view name) const {
    for (const auto& e : entries_) {
        if (e.type == 2 && iequals(e.name, name)) {
            if (e.size < mini_cutoff_) return read_mini_chain(e.start_sector, e.size);
            return read_chain(e.start_sector, e.size);
        }
    }
    return std::nullopt;
}

}  // namespace dh::fetch
