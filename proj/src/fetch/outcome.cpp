#include "dh/fetch/outcome.hpp"

#include <nlohmann/json.hpp>

namespace dh::fetch {

std::string to_string(FetchStatus s) {
    switch (s) {
        case FetchStatus::Stored: return "Stored";
        case FetchStatus::Rejected: return "Rejected";
        case FetchStatus::Failed: return "Failed";
    }
    return "Failed";
}

std::string to_string(RejectionKind k) {
    switch (k) {
        case RejectionKind::None: return "None";
        case RejectionKind::HttpCode: return "HttpCode";
        case RejectionKind::InvalidUrl: return "InvalidUrl";
        case RejectionKind::RetryRedirect: return "RetryRedirect";
        case RejectionKind::NoResponse: return "NoResponse";
        case RejectionKind::WrongFileFormat: return "WrongFileFormat";
        case RejectionKind::ContentType: return "ContentType";
        case RejectionKind::TooLarge: return "TooLarge";
        case RejectionKind::Maldoc: return "Maldoc";
        case RejectionKind::DuplicateContent: return "DuplicateContent";
        case RejectionKind::Internal: return "Internal";
    }
    return "Internal";
}

std::optional<FetchStatus> fetch_status_from_string(std::string_view s) {
    if (s == "Stored") return FetchStatus::Stored;
    if (s == "Rejected") return FetchStatus::Rejected;
    if (s == "Failed") return FetchStatus::Failed;
    return std::nullopt;
}

std::optional<RejectionKind> rejection_kind_from_string(std::string_view s) {
    for (int k = 0; k <= int(RejectionKind::Internal); ++k)
        if (to_string(RejectionKind(k)) == s) return RejectionKind(k);
    return std::nullopt;
}

std::string outcome_to_jsonl(const FetchOutcome& o) {
    nlohmann::json j;
    j["url"] = o.url;
    j["status"] = to_string(o.status);
    if (o.http_code) j["http_code"] = *o.http_code;
    else j["http_code"] = nullptr;
    j["reason_kind"] = to_string(o.reason.kind);
    j["reason_detail"] = o.reason.detail;
    if (o.byte_hash) j["byte_hash"] = *o.byte_hash;
    else j["byte_hash"] = nullptr;
    if (o.stored_path) j["stored_path"] = *o.stored_path;
    if (o.content_length) j["content_length"] = *o.content_length;
    else j["content_length"] = nullptr;
    j["fetched_at"] = o.fetched_at;
    if (o.magic_override) j["magic_override"] = true;
    return j.dump();
}

std::optional<FetchOutcome> outcome_from_jsonl(std::string_view line) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    FetchOutcome o;
    if (!j.contains("url") || !j.contains("status")) return std::nullopt;
    o.url = j["url"].get<std::string>();
    auto status = fetch_status_from_string(j["status"].get<std::string>());
    if (!status) return std::nullopt;
    o.status = *status;
    if (j.contains("http_code") && j["http_code"].is_number())
        o.http_code = j["http_code"].get<int>();
    if (j.contains("reason_kind")) {
        auto kind = rejection_kind_from_string(j["reason_kind"].get<std::string>());
        o.reason.kind = kind.value_or(RejectionKind::Internal);
    }
    if (j.contains("reason_detail")) o.reason.detail = j["reason_detail"].get<std::string>();
    if (j.contains("byte_hash") && j["byte_hash"].is_string())
        o.byte_hash = j["byte_hash"].get<std::string>();
    if (j.contains("stored_path") && j["stored_path"].is_string())
        o.stored_path = j["stored_path"].get<std::string>();
    if (j.contains("content_length") && j["content_length"].is_number())
        o.content_length = j["content_length"].get<std::uint64_t>();
    if (j.contains("fetched_at")) o.fetched_at = j["fetched_at"].get<std::int64_t>();
    if (j.contains("magic_override")) o.magic_override = j["magic_override"].get<bool>();
    return o;
}

}  // namespace dh::fetch
