#include "dh/fetch/content_check.hpp"

#include <algorithm>
#include <cctype>

namespace dh::fetch {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Strips parameters ("; charset=...") and whitespace.
std::string media_type(std::string_view header) {
    auto semi = header.find(';');
    std::string_view mt = header.substr(0, semi);
    while (!mt.empty() && mt.front() == ' ') mt.remove_prefix(1);
    while (!mt.empty() && mt.back() == ' ') mt.remove_suffix(1);
    return lower(mt);
}

}  // namespace

BodyFormat sniff_body_format(BytesView p) {
    if (p.size() >= 4 && p[0] == 'P' && p[1] == 'K' && p[2] == 0x03 && p[3] == 0x04)
        return BodyFormat::Docx;
    static const std::uint8_t kCfb[8] = {0xd0, 0xcf, 0x11, 0xe0, 0xa1, 0xb1, 0x1a, 0xe1};
    if (p.size() >= 8 && std::equal(kCfb, kCfb + 8, p.begin())) return BodyFormat::LegacyDoc;
    return BodyFormat::Unknown;
}

bool decision_accepts(ContentDecision d) {
    return d == ContentDecision::AcceptHeader || d == ContentDecision::AcceptMagicOverride;
}

ContentDecision check_content_type(const std::optional<std::string>& content_type,
                                   BytesView body_prefix, const FetchPolicy& policy) {
    const BodyFormat format = sniff_body_format(body_prefix);
    const bool magic_ok = format != BodyFormat::Unknown;
    if (!content_type || content_type->empty()) {
        // Missing header falls through to the magic-byte check.
        return magic_ok ? ContentDecision::AcceptHeader : ContentDecision::RejectWrongFormat;
    }
    const std::string mt = media_type(*content_type);
    const bool header_ok =
        std::any_of(policy.accepted_content_types.begin(), policy.accepted_content_types.end(),
                    [&](const std::string& accepted) { return lower(accepted) == mt; });
    if (header_ok && magic_ok) return ContentDecision::AcceptHeader;
    if (header_ok && !magic_ok) return ContentDecision::RejectWrongFormat;
    if (!header_ok && magic_ok) return ContentDecision::AcceptMagicOverride;
    return ContentDecision::RejectContentType;
}

}  // namespace dh::fetch
