#pragma once

#include <string>
#include <vector>

#include "dh/core/bytes.hpp"

namespace dh::harvest {

struct WatRecordRef {
    enum class Type { Metadata, Other };
    Type warc_type = Type::Other;
    std::string target_uri;
    std::string payload;  // raw metadata text (JSON for WAT records)
};

struct WatParseResult {
    std::vector<WatRecordRef> metadata_records;  // file order
    std::size_t total_records = 0;               // every record of any type
    std::size_t other_records = 0;
    std::size_t malformed_records = 0;           // unparsable headers, skipped
    bool stream_corrupt = false;                 // gzip truncation/corruption
    std::size_t gzip_members = 0;
};

// Parses a gzip-member-concatenated WARC/WAT byte stream. Malformed record
// headers are skipped and counted; decompression failure keeps everything
// decoded before the corruption point and flags stream_corrupt.
WatParseResult parse_wat_stream(BytesView compressed);

// Same, over an already-decompressed WARC byte buffer.
WatParseResult parse_warc_buffer(std::string_view buffer);

struct UrlRecord {
    std::string url;  // normalized absolute http/https URL
    std::string snapshot_id;
    std::string source_wat;
};

struct ExtractStats {
    std::size_t links_seen = 0;
    std::size_t links_skipped = 0;  // unparsable or non-Word links
};

// Pulls Word-document links out of one metadata record's payload, resolving
// relative links against the record's target URI.
std::vector<UrlRecord> extract_word_urls(const WatRecordRef& record,
                                         const std::string& snapshot_id,
                                         const std::string& source_wat,
                                         ExtractStats* stats = nullptr);

}  // namespace dh::harvest
