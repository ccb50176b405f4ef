#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dh/core/bytes.hpp"

namespace dh::fetch {

// OLE Compound File Binary reader: directory walk plus stream extraction,
// enough for the malware screen (storage names, WordDocument FIB bytes).
struct CfbEntry {
    std::string name;        // UTF-8, decoded from UTF-16LE directory names
    std::uint8_t type = 0;   // 1 storage, 2 stream, 5 root
    std::uint64_t size = 0;
    std::uint32_t start_sector = 0;
};

bool looks_like_cfb(BytesView data);

class CfbFile {
public:
    static CfbFile parse(BytesView data);  // throws CfbError

    const std::vector<CfbEntry>& entries() const { return entries_; }
    bool has_storage(std::string_view name) const;
    bool has_stream(std::string_view name) const;
    std::optional<Bytes> read_stream(std::string_view name) const;

private:
    Bytes data_;
    std::vector<CfbEntry> entries_;
    std::vector<std::uint32_t> fat_;
    std::vector<std::uint32_t> mini_fat_;
    std::uint32_t sector_size_ = 512;
    std::uint32_t mini_sector_size_ = 64;
    std::uint32_t mini_cutoff_ = 4096;
    Bytes mini_stream_;

    Bytes read_chain(std::uint32_t start, std::uint64_t size) const;
    Bytes read_mini_chain(std::uint32_t start, std::uint64_t size) const;
};

}  // namespace dh::fetch
