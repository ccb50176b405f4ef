#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "dh/core/bytes.hpp"

namespace dh {

using Sha256Digest = std::array<std::uint8_t, 32>;

// Incremental SHA-256 (FIPS 180-4).
class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    void update(BytesView data);
    void update(std::string_view data) {
        update(BytesView(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
    }
    Sha256Digest finish();

    static Sha256Digest digest(BytesView data);
    static std::string hex_digest(BytesView data);

private:
    void process_block(const std::uint8_t* block);

    std::array<std::uint32_t, 8> state_{};
    std::array<std::uint8_t, 64> buffer_{};
    std::uint64_t total_bytes_ = 0;
    std::size_t buffered_ = 0;
};

}  // namespace dh
