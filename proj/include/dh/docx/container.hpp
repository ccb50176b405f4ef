#pragma once

#include <map>
#include <string>
#include <vector>

#include "dh/core/error.hpp"
#include "dh/core/xml.hpp"
#include "dh/core/zip.hpp"

namespace dh::docx {

class InvalidZip : public Error {
public:
    using Error::Error;
};
class ZipBomb : public Error {
public:
    using Error::Error;
};
class OversizeImage : public Error {
public:
    using Error::Error;
};

struct Relationship {
    std::string id;
    std::string type;
    std::string target;       // resolved part name (container path)
    bool external = false;
};

// An opened .docx container. open() enforces the preliminary screens:
// total uncompressed size at most 20x the compressed archive, and no image
// part above 22.4M pixels (dimensions read from headers only).
class Container {
public:
    static constexpr double kMaxCompressionRatio = 20.0;
    static constexpr long long kMaxImagePixels = 22'400'000;

    static Container open(Bytes docx_bytes);

    const zip::Reader& archive() const { return zip_; }
    bool has_part(const std::string& name) const { return zip_.has(name); }
    Bytes read_part(const std::string& name) const { return zip_.read(name); }
    xml::Node parse_part(const std::string& name) const;

    const std::string& main_part() const { return main_part_; }

    // Relationships of a part (from its .rels sibling); empty when absent.
    std::vector<Relationship> relationships_of(const std::string& part_name) const;

    // Parts reachable from the main part by relationship type suffix
    // ("/header", "/footer", ...), in relationship-id order.
    std::vector<std::string> related_parts(const std::string& type_suffix) const;

private:
    zip::Reader zip_;
    std::string main_part_ = "word/document.xml";
};

}  // namespace dh::docx
