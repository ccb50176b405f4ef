#include "dh/docx/container.hpp"

#include <algorithm>
#include <cctype>

#include "dh/core/png.hpp"

namespace dh::docx {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool has_image_extension(const std::string& name) {
    auto dot = name.rfind('.');
    if (dot == std::string::npos) return false;
    std::string ext = lower(name.substr(dot + 1));
    return ext == "png" || ext == "jpg" || ext == "jpeg" || ext == "gif" || ext == "bmp";
}

// "word/document.xml" -> "word/_rels/document.xml.rels"
std::string rels_part_for(const std::string& part) {
    auto slash = part.rfind('/');
    if (slash == std::string::npos) return "_rels/" + part + ".rels";
    return part.substr(0, slash) + "/_rels/" + part.substr(slash + 1) + ".rels";
}

// Resolves a relationship target relative to the source part's directory.
std::string resolve_target(const std::string& source_part, const std::string& target) {
    if (target.rfind('/', 0) == 0) return target.substr(1);
    auto slash = source_part.rfind('/');
    std::string dir = slash == std::string::npos ? "" : source_part.substr(0, slash + 1);
    std::string combined = dir + target;
    // collapse "a/b/../c"
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i <= combined.size()) {
        auto next = combined.find('/', i);
        if (next == std::string::npos) next = combined.size();
        std::string seg = combined.substr(i, next - i);
        if (seg == "..") {
            if (!parts.empty()) parts.pop_back();
        } else if (!seg.empty() && seg != ".") {
            parts.push_back(seg);
        }
        i = next + 1;
    }
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) out += '/';
        out += parts[k];
    }
    return out;
}

}  // namespace

Container Container::open(Bytes docx_bytes) {
    Container c;
    const std::uint64_t archive_size = docx_bytes.size();
    try {
        c.zip_ = zip::Reader::open(std::move(docx_bytes));
    } catch (const ZipError& e) {
        throw InvalidZip(e.what());
    }
    const std::uint64_t total_uncompressed = c.zip_.total_uncompressed();
    if (archive_size > 0 &&
        double(total_uncompressed) > kMaxCompressionRatio * double(archive_size))
        throw ZipBomb("uncompressed " + std::to_string(total_uncompressed) + " bytes vs " +
                      std::to_string(archive_size) + " compressed");
    for (std::size_t i = 0; i < c.zip_.entries().size(); ++i) {
        const auto& entry = c.zip_.entries()[i];
        if (!has_image_extension(entry.name)) continue;
        Bytes bytes;
        try {
            bytes = c.zip_.read(i);
        } catch (const ZipError& e) {
            throw InvalidZip(e.what());
        }
        if (auto dims = probe_image_dims(bytes)) {
            long long pixels = static_cast<long long>(dims->width) * dims->height;
            if (pixels > kMaxImagePixels)
                throw OversizeImage(entry.name + ": " + std::to_string(pixels) + " pixels");
        }
    }
    // Main part from the package rels when present.
    if (c.zip_.has("_rels/.rels")) {
        try {
            auto root = c.parse_part("_rels/.rels");
            for (const auto& rel : root.children) {
                if (!rel.is_element()) continue;
                auto type = rel.attr("Type");
                auto target = rel.attr("Target");
                if (type && target && type->ends_with("/officeDocument"))
                    c.main_part_ = resolve_target("", std::string(*target));
            }
        } catch (const XmlError&) {
        }
    }
    if (!c.zip_.has(c.main_part_)) throw InvalidZip("missing main document part");
    return c;
}

xml::Node Container::parse_part(const std::string& name) const {
    Bytes bytes = read_part(name);
    return xml::parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::vector<Relationship> Container::relationships_of(const std::string& part_name) const {
    std::vector<Relationship> out;
    std::string rels = rels_part_for(part_name);
    if (!zip_.has(rels)) return out;
    xml::Node root;
    try {
        root = parse_part(rels);
    } catch (const XmlError&) {
        return out;
    }
    for (const auto& rel : root.children) {
        if (!rel.is_element()) continue;
        Relationship r;
        if (auto id = rel.attr("Id")) r.id = std::string(*id);
        if (auto type = rel.attr("Type")) r.type = std::string(*type);
        auto mode = rel.attr("TargetMode");
        r.external = mode && *mode == "External";
        if (auto target = rel.attr("Target"))
            r.target = r.external ? std::string(*target)
                                  : resolve_target(part_name, std::string(*target));
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(),
              [](const Relationship& a, const Relationship& b) { return a.id < b.id; });
    return out;
}

std::vector<std::string> Container::related_parts(const std::string& type_suffix) const {
    std::vector<std::string> out;
    for (const auto& rel : relationships_of(main_part_))
        if (!rel.external && rel.type.ends_with(type_suffix)) out.push_back(rel.target);
    return out;
}

}  // namespace dh::docx
