#include "dh/annotate/colorize.hpp"

#include <algorithm>
#include <map>

#include "dh/core/png.hpp"

namespace dh::annotate {

namespace {

void remove_child(xml::Node& node, std::string_view name) {
    std::erase_if(node.children, [&](const xml::Node& c) { return c.name == name; });
}

void set_shading(xml::Node& props, const std::string& hex) {
    remove_child(props, "w:shd");
    xml::Node shd;
    shd.name = "w:shd";
    shd.set_attr("w:val", "clear");
    shd.set_attr("w:color", "auto");
    shd.set_attr("w:fill", hex);
    props.children.push_back(std::move(shd));
}

void strip_highlight(xml::Node& node) {
    if (node.name == "w:rPr") remove_child(node, "w:highlight");
    for (auto& c : node.children)
        if (c.is_element()) strip_highlight(c);
}

// Runs of the element itself; textbox bodies belong to their own elements.
void color_runs(xml::Node& node, const std::string& hex) {
    for (auto& c : node.children) {
        if (!c.is_element() || c.name == "w:txbxContent") continue;
        if (c.name == "w:r") {
            xml::Node& rpr = c.ensure_front_child("w:rPr");
            remove_child(rpr, "w:highlight");
            remove_child(rpr, "w:color");
            xml::Node color;
            color.name = "w:color";
            color.set_attr("w:val", hex);
            rpr.children.push_back(std::move(color));
            set_shading(rpr, hex);
        }
        color_runs(c, hex);
    }
}

void color_paragraph(xml::Node& p, const std::string& hex) {
    strip_highlight(p);
    xml::Node& ppr = p.ensure_front_child("w:pPr");
    set_shading(ppr, hex);
    color_runs(p, hex);
}

void color_paragraphs_under(xml::Node& node, const std::string& hex) {
    for (auto& c : node.children) {
        if (!c.is_element()) continue;
        if (c.name == "w:p") color_paragraph(c, hex);
        else color_paragraphs_under(c, hex);
    }
}

std::size_t locator_depth(const std::string& locator) {
    return std::count(locator.begin(), locator.end(), '.');
}

}  // namespace

std::optional<Bytes> solid_image_like(BytesView original, Rgb color) {
    auto dims = probe_image_dims(original);
    if (!dims || dims->width <= 0 || dims->height <= 0) return std::nullopt;
    // PNG
    if (original.size() >= 8 && original[0] == 0x89 && original[1] == 'P') {
        Image img(dims->width, dims->height, color);
        return encode_png(img);
    }
    // BMP: 24-bit uncompressed, rows padded to 4 bytes, bottom-up.
    if (original.size() >= 2 && original[0] == 'B' && original[1] == 'M') {
        const int w = dims->width, h = dims->height;
        const std::size_t row = (std::size_t(w) * 3 + 3) & ~std::size_t(3);
        const std::size_t data_size = row * std::size_t(h);
        Bytes out;
        out.reserve(54 + data_size);
        auto w32 = [&](std::uint32_t v) {
            for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
        };
        auto w16 = [&](std::uint16_t v) {
            out.push_back(std::uint8_t(v));
            out.push_back(std::uint8_t(v >> 8));
        };
        out.push_back('B');
        out.push_back('M');
        w32(std::uint32_t(54 + data_size));
        w32(0);
        w32(54);
        w32(40);  // BITMAPINFOHEADER
        w32(std::uint32_t(w));
        w32(std::uint32_t(h));
        w16(1);
        w16(24);
        w32(0);
        w32(std::uint32_t(data_size));
        w32(2835);
        w32(2835);
        w32(0);
        w32(0);
        for (int y = 0; y < h; ++y) {
            std::size_t written = 0;
            for (int x = 0; x < w; ++x) {
                out.push_back(color.b);
                out.push_back(color.g);
                out.push_back(color.r);
                written += 3;
            }
            while (written++ % 4 != 0) out.push_back(0);
        }
        return out;
    }
    return std::nullopt;
}

ColorizeResult colorize(const docx::Container& container, const docx::DocumentModel& model,
                        const ColorMap& colors) {
    ColorizeResult result;

    // Elements grouped by part; deeper locators first so property insertions
    // never shift a path that is still pending.
    std::map<std::string, std::vector<const docx::DocElement*>> by_part;
    std::map<std::string, Bytes> replaced_parts;  // image part -> new bytes
    for (const auto& e : model.elements) {
        if (e.source == docx::SourceKind::Figure) {
            if (e.image_rel_id.empty()) {
                ++result.failed;
                continue;
            }
            std::string target;
            for (const auto& rel : container.relationships_of(e.part))
                if (rel.id == e.image_rel_id && !rel.external) target = rel.target;
            if (target.empty() || !container.has_part(target)) {
                ++result.failed;
                continue;
            }
            auto replacement =
                solid_image_like(container.read_part(target), colors.color_of(e.category));
            if (!replacement) {
                ++result.failed;
                continue;
            }
            replaced_parts[target] = std::move(*replacement);
            ++result.edited;
            continue;
        }
        by_part[e.part].push_back(&e);
    }

    std::map<std::string, std::string> rewritten_parts;  // part -> serialized XML
    for (auto& [part, elements] : by_part) {
        xml::Node root;
        try {
            root = container.parse_part(part);
        } catch (const XmlError&) {
            result.failed += elements.size();
            continue;
        }
        std::stable_sort(elements.begin(), elements.end(),
                         [](const docx::DocElement* a, const docx::DocElement* b) {
                             return locator_depth(a->xml_locator) > locator_depth(b->xml_locator);
                         });
        for (const auto* e : elements) {
            xml::Node* node = xml::resolve_path(root, e->xml_locator);
            if (!node) {
                ++result.failed;
                continue;
            }
            const std::string hex = colors.hex_of(e->category);
            switch (e->source) {
                case docx::SourceKind::Table: {
                    xml::Node& tbl_pr = node->ensure_front_child("w:tblPr");
                    set_shading(tbl_pr, hex);
                    break;
                }
                case docx::SourceKind::TableCell: {
                    xml::Node& tc_pr = node->ensure_front_child("w:tcPr");
                    set_shading(tc_pr, hex);
                    color_paragraphs_under(*node, hex);
                    break;
                }
                case docx::SourceKind::HeaderRow: {
                    xml::Node& tr_pr = node->ensure_front_child("w:trPr");
                    set_shading(tr_pr, hex);
                    break;
                }
                case docx::SourceKind::TocBlock:
                case docx::SourceKind::FormTagBlock:
                    color_paragraphs_under(*node, hex);
                    break;
                default:
                    color_paragraph(*node, hex);
                    break;
            }
            ++result.edited;
        }
        rewritten_parts[part] = xml::serialize(root);
    }

    // Rebuild the archive in entry order.
    zip::Writer writer;
    const auto& reader = container.archive();
    for (std::size_t i = 0; i < reader.entries().size(); ++i) {
        const std::string& name = reader.entries()[i].name;
        if (auto it = rewritten_parts.find(name); it != rewritten_parts.end()) {
            writer.add(name, std::string_view(it->second));
        } else if (auto rp = replaced_parts.find(name); rp != replaced_parts.end()) {
            writer.add(name, BytesView(rp->second));
        } else {
            writer.add(name, BytesView(reader.read(i)));
        }
    }
    result.container_bytes = writer.finish();
    return result;
}

}  // namespace dh::annotate
