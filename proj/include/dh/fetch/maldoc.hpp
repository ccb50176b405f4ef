#pragma once

#include <stdexcept>

#include "dh/core/bytes.hpp"

namespace dh::fetch {

struct MaldocFlags {
    bool has_vba = false;
    bool has_external_relations = false;
    bool has_ole_object_pool = false;
    bool is_encrypted = false;
    bool has_flash = false;

    bool any() const {
        return has_vba || has_external_relations || has_ole_object_pool || is_encrypted ||
               has_flash;
    }
};

// Screens a candidate document (zip container or OLE compound file).
// Throws UnparsableContainer (dh::Error subclass) when bytes parse as neither.
class UnparsableContainer : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

MaldocFlags maldoc_screen(BytesView bytes);

}  // namespace dh::fetch
