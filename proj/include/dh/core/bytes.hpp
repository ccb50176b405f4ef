#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dh {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(BytesView b) {
    return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

inline BytesView view_of(const std::string& s) {
    return BytesView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

inline bool starts_with(BytesView b, std::initializer_list<std::uint8_t> magic) {
    if (b.size() < magic.size()) return false;
    std::size_t i = 0;
    for (auto m : magic)
        if (b[i++] != m) return false;
    return true;
}

}  // namespace dh
