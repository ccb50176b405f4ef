#include "dh/harvest/url.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace dh::harvest {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool valid_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '+' || c == '-' || c == '.';
    });
}

void split_authority(std::string_view auth, Url& u) {
    auto at = auth.rfind('@');
    if (at != std::string_view::npos) {
        u.userinfo = std::string(auth.substr(0, at));
        auth.remove_prefix(at + 1);
    }
    if (!auth.empty() && auth.front() == '[') {  // IPv6 literal
        auto close = auth.find(']');
        if (close == std::string_view::npos) {
            u.host = std::string(auth);
            return;
        }
        u.host = std::string(auth.substr(0, close + 1));
        auth.remove_prefix(close + 1);
        if (!auth.empty() && auth.front() == ':') u.port = std::string(auth.substr(1));
        return;
    }
    auto colon = auth.find(':');
    if (colon != std::string_view::npos) {
        u.host = std::string(auth.substr(0, colon));
        u.port = std::string(auth.substr(colon + 1));
    } else {
        u.host = std::string(auth);
    }
}

// RFC 3986 §5.2.4
std::string remove_dot_segments(std::string_view path) {
    std::string input(path);
    std::string output;
    while (!input.empty()) {
        if (input.rfind("../", 0) == 0) {
            input.erase(0, 3);
        } else if (input.rfind("./", 0) == 0) {
            input.erase(0, 2);
        } else if (input.rfind("/./", 0) == 0) {
            input.replace(0, 3, "/");
        } else if (input == "/.") {
            input = "/";
        } else if (input.rfind("/../", 0) == 0) {
            input.replace(0, 4, "/");
            auto slash = output.rfind('/');
            output.erase(slash == std::string::npos ? 0 : slash);
        } else if (input == "/..") {
            input = "/";
            auto slash = output.rfind('/');
            output.erase(slash == std::string::npos ? 0 : slash);
        } else if (input == "." || input == "..") {
            input.clear();
        } else {
            std::size_t start = input[0] == '/' ? 1 : 0;
            auto next = input.find('/', start);
            if (next == std::string::npos) next = input.size();
            output += input.substr(0, next);
            input.erase(0, next);
        }
    }
    return output;
}

std::string merge_paths(const Url& base, std::string_view ref_path) {
    if (base.has_authority && base.path.empty()) return "/" + std::string(ref_path);
    auto slash = base.path.rfind('/');
    if (slash == std::string::npos) return std::string(ref_path);
    return base.path.substr(0, slash + 1) + std::string(ref_path);
}

}  // namespace

std::optional<Url> parse_url(std::string_view s) {
    Url u;
    // Strip fragment first.
    auto hash = s.find('#');
    if (hash != std::string_view::npos) {
        u.fragment = std::string(s.substr(hash + 1));
        s = s.substr(0, hash);
    }
    // Scheme.
    auto colon = s.find(':');
    auto slash = s.find('/');
    if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash) &&
        valid_scheme(s.substr(0, colon))) {
        u.scheme = std::string(s.substr(0, colon));
        s = s.substr(colon + 1);
    }
    // Authority.
    if (s.size() >= 2 && s[0] == '/' && s[1] == '/') {
        u.has_authority = true;
        s = s.substr(2);
        auto end = s.find_first_of("/?");
        std::string_view auth = s.substr(0, end);
        split_authority(auth, u);
        s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
    }
    // Path / query.
    auto q = s.find('?');
    if (q != std::string_view::npos) {
        u.query = std::string(s.substr(q + 1));
        s = s.substr(0, q);
    }
    u.path = std::string(s);
    if (!u.scheme.empty() && u.has_authority && u.host.empty()) return std::nullopt;
    // Control characters or spaces make a link unusable.
    auto bad = [](const std::string& part) {
        return std::any_of(part.begin(), part.end(),
                           [](unsigned char c) { return c <= 0x20 || c == 0x7f; });
    };
    if (bad(u.host) || bad(u.scheme)) return std::nullopt;
    return u;
}

std::string normalize_url(const Url& u) {
    std::string out = lower(u.scheme);
    out += "://";
    if (!u.userinfo.empty()) {
        out += u.userinfo;
        out += '@';
    }
    out += lower(u.host);
    if (!u.port.empty()) {
        out += ':';
        out += u.port;
    }
    out += u.path.empty() ? "/" : u.path;
    if (!u.query.empty()) {
        out += '?';
        out += u.query;
    }
    return out;
}

Url resolve_reference(const Url& base, const Url& ref) {
    Url out;
    if (!ref.scheme.empty()) {
        out = ref;
        out.path = remove_dot_segments(ref.path);
        return out;
    }
    out.scheme = base.scheme;
    if (ref.has_authority) {
        out.has_authority = true;
        out.userinfo = ref.userinfo;
        out.host = ref.host;
        out.port = ref.port;
        out.path = remove_dot_segments(ref.path);
        out.query = ref.query;
        return out;
    }
    out.has_authority = base.has_authority;
    out.userinfo = base.userinfo;
    out.host = base.host;
    out.port = base.port;
    if (ref.path.empty()) {
        out.path = base.path;
        out.query = ref.query.empty() ? base.query : ref.query;
        return out;
    }
    out.query = ref.query;
    if (ref.path.front() == '/') out.path = remove_dot_segments(ref.path);
    else out.path = remove_dot_segments(merge_paths(base, ref.path));
    return out;
}

bool path_has_word_suffix(std::string_view path) {
    auto ends_ci = [&](std::string_view suffix) {
        if (path.size() < suffix.size()) return false;
        auto tail = path.substr(path.size() - suffix.size());
        return std::equal(tail.begin(), tail.end(), suffix.begin(), [](char a, char b) {
            return std::tolower(static_cast<unsigned char>(a)) == b;
        });
    };
    return ends_ci(".doc") || ends_ci(".docx");
}

std::optional<std::string> word_url_from_link(std::string_view link, std::string_view base_url) {
    auto ref = parse_url(link);
    if (!ref) return std::nullopt;
    Url abs = *ref;
    if (ref->scheme.empty() || !ref->has_authority) {
        auto base = parse_url(base_url);
        if (!base || base->scheme.empty()) return std::nullopt;
        abs = resolve_reference(*base, *ref);
    }
    std::string scheme = lower(abs.scheme);
    if (scheme != "http" && scheme != "https") return std::nullopt;
    if (abs.host.empty()) return std::nullopt;
    if (!path_has_word_suffix(abs.path)) return std::nullopt;
    return normalize_url(abs);
}

}  // namespace dh::harvest
