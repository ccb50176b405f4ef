#pragma once

#include <optional>
#include <string>

#include "dh/core/bytes.hpp"
#include "dh/fetch/outcome.hpp"

namespace dh::fetch {

enum class BodyFormat { Docx, LegacyDoc, Unknown };

// PK\x03\x04 for docx, D0 CF 11 E0 A1 B1 1A E1 for legacy doc.
BodyFormat sniff_body_format(BytesView body_prefix);

enum class ContentDecision {
    AcceptHeader,         // header matched and magic agrees (or is absent)
    AcceptMagicOverride,  // header wrong/missing, magic bytes matched
    RejectContentType,    // header wrong and magic wrong
    RejectWrongFormat,    // header acceptable (or missing) but body is not a Word file
};

bool decision_accepts(ContentDecision d);

// `content_type` is the raw header value (may be empty when absent); only the
// first 8 bytes of the body are consulted.
ContentDecision check_content_type(const std::optional<std::string>& content_type,
                                   BytesView body_prefix, const FetchPolicy& policy);

}  // namespace dh::fetch
