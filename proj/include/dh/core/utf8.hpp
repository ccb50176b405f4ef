#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dh {

// Decodes one UTF-8 scalar at pos; advances pos. Invalid sequences decode as
// U+FFFD and advance one byte.
char32_t utf8_next(std::string_view s, std::size_t& pos);

// Number of Unicode scalar values in s.
std::size_t utf8_length(std::string_view s);

std::vector<char32_t> utf8_decode(std::string_view s);

void utf8_append(std::string& out, char32_t cp);

std::string utf8_encode(const std::vector<char32_t>& cps);

}  // namespace dh
