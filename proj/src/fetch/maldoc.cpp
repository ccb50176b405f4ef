#include "dh/fetch/maldoc.hpp"

#include <algorithm>
#include <cctype>

#include "dh/core/error.hpp"
#include "dh/core/xml.hpp"
#include "dh/core/zip.hpp"
#include "dh/fetch/cfb.hpp"

namespace dh::fetch {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool name_is(std::string_view path, std::string_view filename) {
    auto slash = path.rfind('/');
    std::string_view base = slash == std::string_view::npos ? path : path.substr(slash + 1);
    return lower(base) == lower(filename);
}

bool contains_seq(BytesView haystack, BytesView needle) {
    if (needle.empty() || haystack.size() < needle.size()) return false;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
           haystack.end();
}

// Adobe Flash OLE markers: the ShockwaveFlash ProgID (ASCII and UTF-16LE) and
// the D27CDB6E-AE6D-11CF-96B8-444553540000 CLSID in its on-disk byte order.
bool has_flash_marker(BytesView data) {
    static const char kProgId[] = "ShockwaveFlash";
    Bytes ascii(kProgId, kProgId + sizeof(kProgId) - 1);
    if (contains_seq(data, ascii)) return true;
    Bytes wide;
    for (char c : std::string_view(kProgId)) {
        wide.push_back(std::uint8_t(c));
        wide.push_back(0);
    }
    if (contains_seq(data, wide)) return true;
    static const std::uint8_t kClsid[16] = {0x6e, 0xdb, 0x7c, 0xd2, 0x6d, 0xae, 0xcf, 0x11,
                                            0x96, 0xb8, 0x44, 0x45, 0x53, 0x54, 0x00, 0x00};
    return contains_seq(data, BytesView(kClsid, 16));
}

bool is_hyperlink_relation(std::string_view type) {
    return lower(type).find("hyperlink") != std::string::npos;
}

MaldocFlags screen_zip(const zip::Reader& reader) {
    MaldocFlags flags;
    for (std::size_t i = 0; i < reader.entries().size(); ++i) {
        const auto& entry = reader.entries()[i];
        if (name_is(entry.name, "vbaProject.bin")) flags.has_vba = true;
        const std::string entry_lower = lower(entry.name);
        if (entry_lower.size() > 5 &&
            entry_lower.compare(entry_lower.size() - 5, 5, ".rels") == 0) {
            try {
                auto content = reader.read(i);
                auto root = xml::parse(
                    std::string_view(reinterpret_cast<const char*>(content.data()), content.size()));
                for (const auto& rel : root.children) {
                    if (!rel.is_element()) continue;
                    auto mode = rel.attr("TargetMode");
                    if (mode && *mode == "External") {
                        auto type = rel.attr("Type");
                        if (!type || !is_hyperlink_relation(*type))
                            flags.has_external_relations = true;
                    }
                }
            } catch (const Error&) {
                // Unreadable rels part: leave to the format screen upstream.
            }
        }
        bool embedded_object = entry_lower.rfind("word/embeddings/", 0) == 0 ||
                               entry_lower.rfind("word/activex", 0) == 0 ||
                               entry_lower.rfind("word/objects/", 0) == 0;
        if (embedded_object) {
            try {
                auto content = reader.read(i);
                if (has_flash_marker(content)) flags.has_flash = true;
            } catch (const Error&) {
            }
        }
    }
    return flags;
}

MaldocFlags screen_cfb(const CfbFile& cfb, BytesView raw) {
    MaldocFlags flags;
    if (cfb.has_storage("Macros") || cfb.has_storage("VBA") || cfb.has_storage("_VBA_PROJECT_CUR"))
        flags.has_vba = true;
    if (cfb.has_storage("ObjectPool")) flags.has_ole_object_pool = true;
    if (cfb.has_stream("EncryptionInfo")) flags.is_encrypted = true;
    if (auto word_doc = cfb.read_stream("WordDocument"); word_doc && word_doc->size() >= 12) {
        // FIB base: 16-bit flag word at offset 0x0A, fEncrypted is bit 8.
        std::uint16_t fib_flags = std::uint16_t((*word_doc)[10]) |
                                  std::uint16_t((*word_doc)[11]) << 8;
        if (fib_flags & 0x0100) flags.is_encrypted = true;
    }
    if (has_flash_marker(raw)) flags.has_flash = true;
    return flags;
}

}  // namespace

MaldocFlags maldoc_screen(BytesView bytes) {
    if (bytes.size() >= 4 && bytes[0] == 'P' && bytes[1] == 'K' && bytes[2] == 3 && bytes[3] == 4) {
        try {
            auto reader = zip::Reader::open(Bytes(bytes.begin(), bytes.end()));
            return screen_zip(reader);
        } catch (const ZipError& e) {
            throw UnparsableContainer(e.what());
        }
    }
    if (looks_like_cfb(bytes)) {
        try {
            auto cfb = CfbFile::parse(bytes);
            return screen_cfb(cfb, bytes);
        } catch (const CfbError& e) {
            throw UnparsableContainer(e.what());
        }
    }
    throw UnparsableContainer("neither zip nor compound file");
}

}  // namespace dh::fetch
