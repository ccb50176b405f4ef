#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace dh::harvest {

struct Url {
    std::string scheme;
    std::string userinfo;
    std::string host;
    std::string port;
    std::string path;
    std::string query;
    std::string fragment;
    bool has_authority = false;
};

// Parses an absolute or relative URI reference. Returns nullopt for strings
// that cannot be split into components at all.
std::optional<Url> parse_url(std::string_view s);

// Lowercase scheme and host, drop the fragment, keep query and path case,
// leave percent-encoding untouched.
std::string normalize_url(const Url& u);

// RFC 3986 reference resolution (merge + dot-segment removal).
Url resolve_reference(const Url& base, const Url& ref);

// True when the path component ends in ".doc" or ".docx", case-insensitively.
bool path_has_word_suffix(std::string_view path);

// Convenience: resolve `link` against `base_url`, normalize, and return the
// result only for http/https links whose path ends in .doc/.docx.
std::optional<std::string> word_url_from_link(std::string_view link, std::string_view base_url);

}  // namespace dh::harvest
