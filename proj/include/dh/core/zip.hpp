#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dh/core/bytes.hpp"

namespace dh::zip {

struct EntryInfo {
    std::string name;
    std::uint32_t crc32 = 0;
    std::uint64_t compressed_size = 0;
    std::uint64_t uncompressed_size = 0;
    std::uint16_t method = 0;  // 0 stored, 8 deflate
    std::uint64_t local_header_offset = 0;
};

// Central-directory based reader over an in-memory archive.
class Reader {
public:
    static Reader open(Bytes data);

    const std::vector<EntryInfo>& entries() const { return entries_; }
    std::optional<std::size_t> find(std::string_view name) const;
    bool has(std::string_view name) const { return find(name).has_value(); }

    Bytes read(std::size_t index) const;
    Bytes read(std::string_view name) const;

    std::uint64_t archive_size() const { return data_.size(); }
    std::uint64_t total_uncompressed() const;
    const Bytes& raw() const { return data_; }

private:
    Bytes data_;
    std::vector<EntryInfo> entries_;
};

class Writer {
public:
    void add(std::string name, BytesView content, bool compress = true);
    void add(std::string name, std::string_view content, bool compress = true);

    // Appends the central directory and returns the archive.
    Bytes finish();

private:
    struct Pending {
        EntryInfo info;
    };
    Bytes out_;
    std::vector<Pending> done_;
};

}  // namespace dh::zip
