#pragma once

#include <array>
#include <optional>
#include <string>

#include "dh/core/bytes.hpp"

namespace dh {

std::string to_hex(BytesView data);

template <std::size_t N>
std::string to_hex(const std::array<std::uint8_t, N>& a) {
    return to_hex(BytesView(a.data(), a.size()));
}

std::optional<Bytes> from_hex(std::string_view hex);

}  // namespace dh
