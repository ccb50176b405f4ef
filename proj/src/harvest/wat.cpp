#include "dh/harvest/wat.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <nlohmann/json.hpp>

#include "dh/core/zstream.hpp"
#include "dh/harvest/url.hpp"

namespace dh::harvest {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Reads one header line ending in \n; returns false at end of buffer.
bool next_line(std::string_view buf, std::size_t& pos, std::string_view& line) {
    if (pos >= buf.size()) return false;
    auto nl = buf.find('\n', pos);
    if (nl == std::string_view::npos) {
        line = buf.substr(pos);
        pos = buf.size();
    } else {
        line = buf.substr(pos, nl - pos);
        pos = nl + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return true;
}

}  // namespace

WatParseResult parse_warc_buffer(std::string_view buf) {
    WatParseResult result;
    std::size_t pos = 0;
    auto resync = [&] {
        auto next = buf.find("\nWARC/", pos);
        pos = next == std::string_view::npos ? buf.size() : next + 1;
    };
    while (pos < buf.size()) {
        // Skip blank separator lines between records.
        while (pos < buf.size() && (buf[pos] == '\r' || buf[pos] == '\n')) ++pos;
        if (pos >= buf.size()) break;
        std::size_t record_start = pos;
        std::string_view line;
        if (!next_line(buf, pos, line)) break;
        if (line.rfind("WARC/", 0) != 0) {
            ++result.malformed_records;
            pos = record_start + 1;
            resync();
            continue;
        }
        std::string warc_type, target_uri;
        long long content_length = -1;
        bool header_ok = true;
        while (next_line(buf, pos, line)) {
            if (line.empty()) break;  // end of header block
            auto colon = line.find(':');
            if (colon == std::string_view::npos) {
                header_ok = false;
                break;
            }
            std::string key = lower(trim(line.substr(0, colon)));
            std::string_view value = trim(line.substr(colon + 1));
            if (key == "warc-type") {
                warc_type = lower(value);
            } else if (key == "warc-target-uri") {
                target_uri = std::string(value);
            } else if (key == "content-length") {
                auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), content_length);
                if (ec != std::errc{}) content_length = -1;
                (void)p;
            }
        }
        if (!header_ok || warc_type.empty() || content_length < 0) {
            ++result.malformed_records;
            resync();
            continue;
        }
        if (pos + static_cast<std::size_t>(content_length) > buf.size()) {
            // Truncated payload; nothing more to read.
            result.stream_corrupt = true;
            break;
        }
        std::string_view payload = buf.substr(pos, static_cast<std::size_t>(content_length));
        pos += static_cast<std::size_t>(content_length);
        ++result.total_records;
        if (warc_type == "metadata") {
            WatRecordRef rec;
            rec.warc_type = WatRecordRef::Type::Metadata;
            rec.target_uri = target_uri;
            rec.payload = std::string(payload);
            result.metadata_records.push_back(std::move(rec));
        } else {
            ++result.other_records;
        }
    }
    return result;
}

WatParseResult parse_wat_stream(BytesView compressed) {
    GzipResult gz = gunzip_members(compressed);
    std::string_view buf(reinterpret_cast<const char*>(gz.data.data()), gz.data.size());
    WatParseResult result = parse_warc_buffer(buf);
    result.stream_corrupt = result.stream_corrupt || gz.truncated;
    result.gzip_members = gz.members;
    return result;
}

std::vector<UrlRecord> extract_word_urls(const WatRecordRef& record,
                                         const std::string& snapshot_id,
                                         const std::string& source_wat, ExtractStats* stats) {
    std::vector<UrlRecord> out;
    if (record.warc_type != WatRecordRef::Type::Metadata) return out;
    auto doc = nlohmann::json::parse(record.payload, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) return out;
    const auto* links = &doc;
    for (const char* key : {"Envelope", "Payload-Metadata", "HTTP-Response-Metadata",
                            "HTML-Metadata", "Links"}) {
        if (!links->is_object() || !links->contains(key)) return out;
        links = &(*links)[key];
    }
    if (!links->is_array()) return out;
    for (const auto& link : *links) {
        if (!link.is_object() || !link.contains("url") || !link["url"].is_string()) {
            if (stats) ++stats->links_skipped;
            continue;
        }
        if (stats) ++stats->links_seen;
        auto normalized = word_url_from_link(link["url"].get<std::string>(), record.target_uri);
        if (!normalized) {
            if (stats) ++stats->links_skipped;
            continue;
        }
        out.push_back(UrlRecord{*normalized, snapshot_id, source_wat});
    }
    return out;
}

}  // namespace dh::harvest
