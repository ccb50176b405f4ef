#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dh::fetch {

struct FetchPolicy {
    int max_redirects = 5;
    int max_retries = 2;
    int timeout_seconds = 30;
    std::uint64_t max_bytes = 10 * 1024 * 1024;  // 10MB compressed-size cap
    std::vector<std::string> accepted_content_types = {
        "application/vnd.openxmlformats-officedocument.wordprocessingml.document",
        "application/msword",
        "application/vnd.ms-word",
    };
    std::string user_agent = "docharvest/1.0";
    int per_host_delay_ms = 0;
};

enum class FetchStatus { Stored, Rejected, Failed };

enum class RejectionKind {
    None,
    HttpCode,
    InvalidUrl,
    RetryRedirect,
    NoResponse,
    WrongFileFormat,
    ContentType,
    TooLarge,
    Maldoc,
    DuplicateContent,
    Internal,
};

std::string to_string(FetchStatus s);
std::string to_string(RejectionKind k);
std::optional<FetchStatus> fetch_status_from_string(std::string_view s);
std::optional<RejectionKind> rejection_kind_from_string(std::string_view s);

struct RejectionReason {
    RejectionKind kind = RejectionKind::None;
    std::string detail;
};

struct FetchOutcome {
    std::string url;
    FetchStatus status = FetchStatus::Failed;
    std::optional<int> http_code;
    RejectionReason reason;
    std::optional<std::string> byte_hash;  // hex SHA-256 of the response body
    std::optional<std::string> stored_path;
    std::optional<std::uint64_t> content_length;
    std::int64_t fetched_at = 0;  // unix seconds
    // Magic bytes accepted a response whose content-type header did not;
    // tracked so header-only statistics stay reproducible.
    bool magic_override = false;
};

// JSONL round trip with the exact journal field names:
// url, status, http_code, reason_kind, reason_detail, byte_hash,
// content_length, fetched_at.
std::string outcome_to_jsonl(const FetchOutcome& o);
std::optional<FetchOutcome> outcome_from_jsonl(std::string_view line);

}  // namespace dh::fetch
