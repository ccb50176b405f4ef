#include "dh/annotate/mock_renderer.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "dh/core/png.hpp"
#include "dh/core/zstream.hpp"

namespace dh::annotate {

namespace {

std::optional<Rgb> parse_hex_color(std::string_view hex) {
    if (hex.size() != 6) return std::nullopt;
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    int v[6];
    for (int i = 0; i < 6; ++i) {
        v[i] = nib(hex[std::size_t(i)]);
        if (v[i] < 0) return std::nullopt;
    }
    return Rgb{std::uint8_t(v[0] * 16 + v[1]), std::uint8_t(v[2] * 16 + v[3]),
               std::uint8_t(v[4] * 16 + v[5])};
}

std::optional<Rgb> shading_fill(const xml::Node* props) {
    if (!props) return std::nullopt;
    if (const auto* shd = props->child("w:shd"))
        if (auto fill = shd->attr("w:fill"))
            if (*fill != "auto") return parse_hex_color(*fill);
    return std::nullopt;
}

// EMU per inch.
constexpr double kEmu = 914400.0;

struct ExtentPx {
    int w = 0, h = 0;
};

std::optional<ExtentPx> drawing_extent(const xml::Node& drawing, int dpi) {
    std::optional<ExtentPx> out;
    std::function<void(const xml::Node&)> walk = [&](const xml::Node& n) {
        if (out) return;
        for (const auto& c : n.children) {
            if (!c.is_element()) continue;
            if (c.name == "wp:extent" || c.name == "a:ext") {
                auto cx = c.attr("cx");
                auto cy = c.attr("cy");
                if (cx && cy) {
                    try {
                        double w = std::stod(std::string(*cx)) / kEmu * dpi;
                        double h = std::stod(std::string(*cy)) / kEmu * dpi;
                        out = ExtentPx{int(std::lround(w)), int(std::lround(h))};
                        return;
                    } catch (...) {
                    }
                }
            }
            walk(c);
        }
    };
    walk(drawing);
    return out;
}

// --- minimal PDF writer -----------------------------------------------------

std::string pdf_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '(' || c == ')' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

struct PdfPageWords {
    std::vector<WordBox> words;
};

Bytes write_pdf(const std::vector<PdfPageWords>& pages, const PageMetrics& m) {
    const double scale = 72.0 / m.dpi;
    const double page_w_pt = m.page_w * scale;
    const double page_h_pt = m.page_h * scale;

    std::vector<std::string> objects;  // 1-based ids implied by order
    const int font_id = 1;
    std::string font = "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /FirstChar 32 "
                       "/LastChar 126 /Widths [";
    for (int i = 32; i <= 126; ++i) font += "600 ";
    font += "] >>";
    objects.push_back(font);

    const int pages_id = 2;
    objects.push_back("");  // placeholder, patched after page ids are known

    std::vector<int> page_ids;
    for (const auto& page : pages) {
        std::string content;
        for (const auto& w : page.words) {
            const double x_pt = w.box.x * scale;
            const double baseline_px = w.box.y + m.ascent_px;
            const double y_pt = page_h_pt - baseline_px * scale;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "BT /F1 %.4f Tf 1 0 0 1 %.4f %.4f Tm (%s) Tj ET\n",
                          m.font_pt, x_pt, y_pt, pdf_escape(w.text).c_str());
            content += buf;
        }
        Bytes deflated = deflate_zlib(
            BytesView(reinterpret_cast<const std::uint8_t*>(content.data()), content.size()));
        std::string stream_obj = "<< /Length " + std::to_string(deflated.size()) +
                                 " /Filter /FlateDecode >>\nstream\n";
        stream_obj += std::string(deflated.begin(), deflated.end());
        stream_obj += "\nendstream";
        objects.push_back(stream_obj);
        int content_id = int(objects.size());
        char page_obj[256];
        std::snprintf(page_obj, sizeof(page_obj),
                      "<< /Type /Page /Parent %d 0 R /MediaBox [0 0 %.4f %.4f] /Resources << "
                      "/Font << /F1 %d 0 R >> >> /Contents %d 0 R >>",
                      pages_id, page_w_pt, page_h_pt, font_id, content_id);
        objects.push_back(page_obj);
        page_ids.push_back(int(objects.size()));
    }

    std::string kids;
    for (int id : page_ids) kids += std::to_string(id) + " 0 R ";
    objects[pages_id - 1] = "<< /Type /Pages /Kids [" + kids + "] /Count " +
                            std::to_string(page_ids.size()) + " >>";

    objects.push_back("<< /Type /Catalog /Pages " + std::to_string(pages_id) + " 0 R >>");
    const int catalog_id = int(objects.size());

    std::string out = "%PDF-1.4\n";
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        offsets.push_back(out.size());
        out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
    }
    std::size_t xref_at = out.size();
    out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n";
    out += "0000000000 65535 f \n";
    for (auto off : offsets) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%010zu 00000 n \n", off);
        out += buf;
    }
    out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) + " /Root " +
           std::to_string(catalog_id) + " 0 R >>\nstartxref\n" + std::to_string(xref_at) +
           "\n%%EOF\n";
    return Bytes(out.begin(), out.end());
}

// --- layout ------------------------------------------------------------------

struct TablePlacement {
    Rect rect;
    int page = 0;
    int rows = 0, cols = 0;
    int row_h = 0, col_w = 0, gap = 0;
    int row_y(int r) const { return rect.y + gap + r * (row_h + gap); }
    int col_x(int c) const { return rect.x + gap + c * (col_w + gap); }
    Rect cell_rect(const docx::TableCellModel& cell) const {
        int x = col_x(cell.col_index);
        int y = row_y(cell.row_index);
        int right = col_x(cell.col_index + cell.col_span - 1) + col_w;
        int bottom = row_y(cell.row_index + cell.row_span - 1) + row_h;
        return Rect{x, y, right - x, bottom - y};
    }
    Rect row_band(int r) const {
        // Inset horizontally so the table's own frame stays 4-connected
        // around the band.
        int gb = gap / 2;
        int inset = gap - gb;
        return Rect{rect.x + inset, row_y(r) - gb, rect.w - 2 * inset, row_h + 2 * gb};
    }
};

}  // namespace

PageMetrics::PageMetrics(int dpi_) : dpi(dpi_) {
    page_w = px(8.5 * 72.0);
    page_h = px(11.0 * 72.0);
    margin = px(72.0);
    content_w = page_w - 2 * margin;
    line_h = px(14.0);
    char_w = px(6.0);
    pad = px(2.0);
    gap = px(6.0);
    font_pt = char_w * 120.0 / dpi;  // 0.6em advance == char_w pixels exactly
    word_h = px(font_pt);
    ascent_px = px(0.8 * font_pt);
}

int PageMetrics::px(double pt) const { return int(std::lround(pt * dpi / 72.0)); }

DocLayout MockRenderer::layout(const Bytes& container_bytes, const RenderOptions& options) {
    const PageMetrics m(options.dpi);
    DocLayout out;
    out.page_width = m.page_w;
    out.page_height = m.page_h;

    docx::Container container = docx::Container::open(container_bytes);
    docx::DocumentModel model = docx::extract_elements(container, "");

    // Parsed part cache for color lookup.
    std::map<std::string, xml::Node> parts;
    auto part_root = [&](const std::string& part) -> xml::Node& {
        auto it = parts.find(part);
        if (it == parts.end()) it = parts.emplace(part, container.parse_part(part)).first;
        return it->second;
    };
    auto node_of = [&](const docx::DocElement& e) -> xml::Node* {
        return xml::resolve_path(part_root(e.part), e.xml_locator);
    };

    auto element_fill = [&](const docx::DocElement& e) -> std::optional<Rgb> {
        xml::Node* node = node_of(e);
        if (!node) return std::nullopt;
        switch (e.source) {
            case docx::SourceKind::Table:
                return shading_fill(node->child("w:tblPr"));
            case docx::SourceKind::TableCell:
                return shading_fill(node->child("w:tcPr"));
            case docx::SourceKind::HeaderRow:
                return shading_fill(node->child("w:trPr"));
            case docx::SourceKind::Figure: {
                std::string target;
                for (const auto& rel : container.relationships_of(e.part))
                    if (rel.id == e.image_rel_id && !rel.external) target = rel.target;
                if (target.empty() || !container.has_part(target)) return std::nullopt;
                try {
                    Image img = decode_png(container.read_part(target));
                    if (img.width() > 0 && img.height() > 0) return img.at(0, 0);
                } catch (const PngError&) {
                }
                return std::nullopt;
            }
            case docx::SourceKind::TocBlock:
            case docx::SourceKind::FormTagBlock: {
                // first paragraph's shading
                for (const auto& c : node->children)
                    if (c.name == "w:sdtContent")
                        for (const auto& p : c.children)
                            if (p.name == "w:p") return shading_fill(p.child("w:pPr"));
                return shading_fill(node->child("w:pPr"));
            }
            default:
                return shading_fill(node->child("w:pPr"));
        }
    };

    auto words_in_rect = [&](const std::string& text, const Rect& r) {
        std::vector<WordBox> words;
        int x = r.x + m.pad;
        int y = r.y + m.pad;
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            std::size_t start = i;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            if (i == start) break;
            std::string word = text.substr(start, i - start);
            int w_px = int(word.size()) * m.char_w;
            if (x + w_px > r.right() - m.pad && x > r.x + m.pad) {
                x = r.x + m.pad;
                y += m.line_h;
            }
            if (y + m.word_h > r.bottom()) break;  // clipped
            words.push_back(WordBox{std::move(word), Rect{x, y, w_px, m.word_h}});
            x += w_px + m.char_w;
        }
        return words;
    };

    auto text_height = [&](const docx::DocElement& e) {
        const int chars_per_line = std::max(1, (m.content_w - 2 * m.pad) / m.char_w);
        const int lines = std::max<int>(1, int((e.char_count + chars_per_line - 1) / chars_per_line));
        return lines * m.line_h + 2 * m.pad;
    };

    int page = 0;
    int y = m.margin;
    const int max_y = m.page_h - m.margin;
    auto place_block = [&](int h) -> Rect {
        h = std::min(h, max_y - m.margin);
        if (y + h > max_y) {
            ++page;
            y = m.margin;
        }
        Rect r{m.margin, y, m.content_w, h};
        y += h + m.gap;
        return r;
    };

    std::vector<TablePlacement> table_places(model.tables.size());
    std::vector<int> header_band_cursor(model.tables.size(), 0);
    std::vector<const docx::DocElement*> header_els, footer_els;

    for (std::size_t idx = 0; idx < model.elements.size(); ++idx) {
        const docx::DocElement& e = model.elements[idx];
        LayoutItem item;
        item.element_ordinal = int(idx);
        item.source = e.source;
        item.fill = element_fill(e);

        switch (e.source) {
            case docx::SourceKind::HeaderParagraph:
                header_els.push_back(&e);
                continue;  // bands added per page at the end
            case docx::SourceKind::FooterParagraph:
                footer_els.push_back(&e);
                continue;
            case docx::SourceKind::Table: {
                const docx::TableModel& t = model.tables[std::size_t(e.table_index)];
                TablePlacement place;
                place.rows = t.rows;
                place.cols = std::max(1, t.cols);
                place.gap = m.gap;
                place.row_h = m.px(22.0);
                int h = t.rows * place.row_h + (t.rows + 1) * m.gap;
                place.rect = place_block(h);
                place.page = page;
                place.col_w = (place.rect.w - (place.cols + 1) * m.gap) / place.cols;
                table_places[std::size_t(e.table_index)] = place;
                item.page = page;
                item.rect = place.rect;
                break;
            }
            case docx::SourceKind::HeaderRow: {
                const docx::TableModel& t = model.tables[std::size_t(e.table_index)];
                const TablePlacement& place = table_places[std::size_t(e.table_index)];
                int& cursor = header_band_cursor[std::size_t(e.table_index)];
                int row = -1;
                for (int r = cursor; r < t.rows; ++r) {
                    if (t.header_rows[std::size_t(r)]) {
                        row = r;
                        cursor = r + 1;
                        break;
                    }
                }
                if (row < 0) continue;
                item.page = place.page;
                item.rect = place.row_band(row);
                break;
            }
            case docx::SourceKind::TableCell: {
                const TablePlacement& place = table_places[std::size_t(e.table_index)];
                const auto& cell =
                    model.tables[std::size_t(e.table_index)].cells[std::size_t(e.cell_index)];
                item.page = place.page;
                item.rect = place.cell_rect(cell);
                item.words = words_in_rect(e.text, item.rect);
                break;
            }
            case docx::SourceKind::Figure: {
                ExtentPx extent{m.px(200.0 * 72.0 / 96.0), m.px(150.0 * 72.0 / 96.0)};
                if (xml::Node* node = node_of(e))
                    if (auto ext = drawing_extent(*node, options.dpi)) extent = *ext;
                int w = std::clamp(extent.w, 1, m.content_w);
                int h = std::clamp(extent.h, 1, max_y - m.margin);
                Rect r = place_block(h);
                r.w = w;
                item.page = page;
                item.rect = r;
                break;
            }
            default: {
                Rect r = place_block(text_height(e));
                item.page = page;
                item.rect = r;
                item.words = words_in_rect(e.text, r);
                break;
            }
        }
        out.items.push_back(std::move(item));
    }

    out.page_count = page + 1;

    // Header/footer bands on every page.
    for (int p = 0; p < out.page_count; ++p) {
        int hy = m.px(24.0);
        for (const auto* e : header_els) {
            LayoutItem item;
            item.element_ordinal = e->element_id;
            item.source = e->source;
            item.fill = element_fill(*e);
            item.page = p;
            item.rect = Rect{m.margin, hy, m.content_w, m.line_h};
            item.words = words_in_rect(e->text, item.rect);
            out.items.push_back(std::move(item));
            hy += m.line_h + m.gap;
        }
        int fy = m.page_h - m.px(24.0) - m.line_h;
        for (const auto* e : footer_els) {
            LayoutItem item;
            item.element_ordinal = e->element_id;
            item.source = e->source;
            item.fill = element_fill(*e);
            item.page = p;
            item.rect = Rect{m.margin, fy, m.content_w, m.line_h};
            item.words = words_in_rect(e->text, item.rect);
            out.items.push_back(std::move(item));
            fy -= m.line_h + m.gap;
        }
    }
    return out;
}

RenderResult MockRenderer::render(const Bytes& container_bytes, const RenderOptions& options) {
    RenderResult result;
    DocLayout doc;
    try {
        doc = layout(container_bytes, options);
    } catch (const Error& e) {
        result.status = RenderStatus::Crashed;
        result.detail = e.what();
        return result;
    }
    result.page_count = doc.page_count;
    if (doc.page_count > options.max_pages) {
        result.status = RenderStatus::TooManyPages;
        result.detail = std::to_string(doc.page_count) + " pages";
        return result;
    }

    const PageMetrics m(options.dpi);
    std::vector<Image> pages(std::size_t(doc.page_count), Image(doc.page_width, doc.page_height));
    std::vector<PdfPageWords> pdf_pages(std::size_t(doc.page_count));

    auto draw_pass = [&](auto predicate) {
        for (const auto& item : doc.items) {
            if (!predicate(item.source)) continue;
            if (item.page < 0 || item.page >= doc.page_count) continue;
            if (item.fill) pages[std::size_t(item.page)].fill_rect(item.rect, *item.fill);
        }
    };
    draw_pass([](docx::SourceKind k) { return k == docx::SourceKind::Table; });
    draw_pass([](docx::SourceKind k) { return k == docx::SourceKind::HeaderRow; });
    draw_pass([](docx::SourceKind k) {
        return k != docx::SourceKind::Table && k != docx::SourceKind::HeaderRow;
    });

    for (const auto& item : doc.items)
        if (item.page >= 0 && item.page < doc.page_count)
            for (const auto& w : item.words) pdf_pages[std::size_t(item.page)].words.push_back(w);

    result.pages = std::move(pages);
    result.pdf = write_pdf(pdf_pages, m);
    result.status = RenderStatus::Ok;
    return result;
}

}  // namespace dh::annotate
