#include "dh/docx/model.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "dh/core/utf8.hpp"
#include "dh/docx/internal.hpp"

namespace dh::docx {

namespace {

constexpr std::string_view kSourceKindNames[] = {
    "BodyParagraph", "TextBoxParagraph", "Table", "TableCell", "HeaderRow",
    "Figure", "Equation", "HeaderParagraph", "FooterParagraph", "FootnoteParagraph",
    "CommentParagraph", "TocBlock", "FormFieldParagraph", "FormTagBlock",
};

// Walks a subtree accumulating visible text. Skips textbox bodies (they
// become their own elements) and mc:Fallback duplicates.
void collect_text(const xml::Node& node, std::string& out) {
    for (const auto& child : node.children) {
        if (child.is_text()) continue;  // visible text lives in w:t leaves
        if (child.name == "w:txbxContent") continue;
        if (child.name == "mc:AlternateContent") {
            if (const auto* choice = child.child("mc:Choice")) collect_text(*choice, out);
            continue;
        }
        if (child.name == "w:t" || child.name == "w:delText") {
            out += child.all_text();
            continue;
        }
        if (child.name == "w:tab") {
            out += '\t';
            continue;
        }
        if (child.name == "w:br" || child.name == "w:cr") {
            out += '\n';
            continue;
        }
        collect_text(child, out);
    }
}

std::string text_of(const xml::Node& node) {
    std::string out;
    collect_text(node, out);
    return out;
}

bool subtree_contains(const xml::Node& node, std::string_view element_name,
                      bool skip_txbx = true) {
    for (const auto& child : node.children) {
        if (!child.is_element()) continue;
        if (skip_txbx && child.name == "w:txbxContent") continue;
        if (child.name == element_name) return true;
        if (subtree_contains(child, element_name, skip_txbx)) return true;
    }
    return false;
}

bool paragraph_has_formtext(const xml::Node& p) {
    bool found = false;
    std::function<void(const xml::Node&)> walk = [&](const xml::Node& n) {
        if (found) return;
        for (const auto& c : n.children) {
            if (!c.is_element() || c.name == "w:txbxContent") continue;
            if (c.name == "w:ffData") {
                found = true;
                return;
            }
            if (c.name == "w:fldSimple") {
                if (auto instr = c.attr("w:instr");
                    instr && instr->find("FORMTEXT") != std::string_view::npos) {
                    found = true;
                    return;
                }
            }
            if (c.name == "w:instrText" &&
                c.all_text().find("FORMTEXT") != std::string::npos) {
                found = true;
                return;
            }
            walk(c);
        }
    };
    walk(p);
    return found;
}

struct Walker {
    const Container& container;
    const StyleRegistry& styles;
    DocumentModel& model;
    std::string part;
    bool main_part = false;

    std::optional<std::string> paragraph_style_id(const xml::Node& p) const {
        if (const auto* ppr = p.child("w:pPr"))
            if (const auto* style = ppr->child("w:pStyle"))
                if (auto val = style->attr("w:val")) return std::string(*val);
        return std::nullopt;
    }

    StyleSignature signature_of(const xml::Node& p) const {
        StyleSignature sig;
        auto style_id = paragraph_style_id(p);
        RunFormat fmt = style_id ? styles.effective_format(*style_id) : styles.document_default();
        if (const auto* ppr = p.child("w:pPr"))
            if (const auto* rpr = ppr->child("w:rPr")) FormatPatch::from_rpr(*rpr).apply_to(fmt);
        if (const auto* run = p.child("w:r"))
            if (const auto* rpr = run->child("w:rPr")) FormatPatch::from_rpr(*rpr).apply_to(fmt);
        sig.font_size_half_points = fmt.font_size_half_points;
        sig.bold = fmt.bold;
        sig.underline = fmt.underline;
        sig.italic = fmt.italic;
        if (style_id) sig.style_name = *style_id;
        return sig;
    }

    DocElement& emit(SourceKind kind, const std::vector<std::size_t>& path, std::string text,
                     StyleSignature sig, bool in_body) {
        DocElement e;
        e.source = kind;
        e.text = std::move(text);
        e.char_count = utf8_length(e.text);
        e.styling = std::move(sig);
        e.part = part;
        e.xml_locator = xml::join_path(path);
        e.in_body = in_body && main_part;
        model.elements.push_back(std::move(e));
        return model.elements.back();
    }

    // Figures and textbox paragraphs nested inside a paragraph, emitted after
    // the paragraph element itself.
    void emit_nested(const xml::Node& node, std::vector<std::size_t>& path) {
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            const xml::Node& child = node.children[i];
            if (!child.is_element()) continue;
            path.push_back(i);
            if (child.name == "mc:AlternateContent") {
                for (std::size_t k = 0; k < child.children.size(); ++k) {
                    if (child.children[k].name == "mc:Choice") {
                        path.push_back(k);
                        emit_nested(child.children[k], path);
                        path.pop_back();
                    }
                }
                path.pop_back();
                continue;
            }
            if (child.name == "w:drawing" || child.name == "w:pict" ||
                child.name == "w:object") {
                std::string rel_id = find_image_rel(child);
                if (!rel_id.empty()) {
                    DocElement& fig = emit(SourceKind::Figure, path, "", StyleSignature{}, false);
                    fig.image_rel_id = rel_id;
                }
                // fall through: a drawing may also hold a textbox
            }
            if (child.name == "w:txbxContent") {
                for (std::size_t k = 0; k < child.children.size(); ++k) {
                    if (child.children[k].name != "w:p") continue;
                    path.push_back(k);
                    const xml::Node& inner = child.children[k];
                    emit(SourceKind::TextBoxParagraph, path, text_of(inner), signature_of(inner),
                         false);
                    path.pop_back();
                }
                path.pop_back();
                continue;
            }
            emit_nested(child, path);
            path.pop_back();
        }
    }

    static std::string find_image_rel(const xml::Node& drawing) {
        std::string rel;
        std::function<void(const xml::Node&)> walk = [&](const xml::Node& n) {
            if (!rel.empty()) return;
            for (const auto& c : n.children) {
                if (!c.is_element()) continue;
                if (c.name == "a:blip") {
                    if (auto embed = c.attr("r:embed")) {
                        rel = std::string(*embed);
                        return;
                    }
                }
                if (c.name == "v:imagedata") {
                    if (auto id = c.attr("r:id")) {
                        rel = std::string(*id);
                        return;
                    }
                }
                walk(c);
            }
        };
        walk(drawing);
        return rel;
    }

    void handle_paragraph(const xml::Node& p, std::vector<std::size_t>& path,
                          SourceKind default_kind) {
        SourceKind kind = default_kind;
        if (default_kind == SourceKind::BodyParagraph) {
            if (paragraph_has_formtext(p)) kind = SourceKind::FormFieldParagraph;
            else if (subtree_contains(p, "m:oMathPara") || subtree_contains(p, "m:oMath"))
                kind = SourceKind::Equation;
        }
        emit(kind, path, text_of(p), signature_of(p), true);
        emit_nested(p, path);
    }

    void handle_table(const xml::Node& tbl, std::vector<std::size_t>& path) {
        auto parsed = internal::parse_table_model(tbl, path, text_of);
        if (!parsed) {
            ++model.malformed_tables;
            return;
        }
        int table_index = int(model.tables.size());
        DocElement& table_el = emit(SourceKind::Table, path, "", StyleSignature{}, true);
        table_el.table_index = table_index;

        // Header-row elements and cell elements in document order.
        std::size_t cell_cursor = 0;
        int row = 0;
        for (std::size_t i = 0; i < tbl.children.size(); ++i) {
            const xml::Node& tr = tbl.children[i];
            if (tr.name != "w:tr") continue;
            path.push_back(i);
            if (parsed->header_rows[std::size_t(row)]) {
                DocElement& hr = emit(SourceKind::HeaderRow, path, "", StyleSignature{}, true);
                hr.table_index = table_index;
            }
            for (; cell_cursor < parsed->cells.size() &&
                   parsed->cells[cell_cursor].row_index == row;
                 ++cell_cursor) {
                const TableCellModel& cell = parsed->cells[cell_cursor];
                // Locator recorded by the table parser; reuse it.
                DocElement e;
                e.source = SourceKind::TableCell;
                e.text = cell.text;
                e.char_count = utf8_length(e.text);
                e.part = part;
                e.xml_locator = cell.xml_locator;
                e.in_body = main_part;
                e.table_index = table_index;
                e.cell_index = cell.cell_id;
                e.styling.font_size_half_points = styles.document_default().font_size_half_points;
                model.elements.push_back(std::move(e));
            }
            path.pop_back();
            ++row;
        }
        model.tables.push_back(std::move(*parsed));
    }

    bool sdt_is_toc(const xml::Node& sdt) const {
        if (const auto* pr = sdt.child("w:sdtPr")) {
            if (const auto* obj = pr->child("w:docPartObj")) {
                if (const auto* gallery = obj->child("w:docPartGallery")) {
                    auto val = gallery->attr("w:val");
                    if (val && val->find("Table of Contents") != std::string_view::npos)
                        return true;
                }
            }
        }
        return false;
    }

    bool sdt_is_form_control(const xml::Node& sdt) const {
        if (const auto* pr = sdt.child("w:sdtPr")) {
            for (const char* marker : {"w:tag", "w:dropDownList", "w:comboBox", "w:date",
                                       "w:text", "w14:checkbox"})
                if (pr->child(marker)) return true;
        }
        return false;
    }

    void handle_block(const xml::Node& node, std::vector<std::size_t>& path,
                      SourceKind paragraph_kind) {
        if (node.name == "w:p") {
            handle_paragraph(node, path, paragraph_kind);
        } else if (node.name == "w:tbl") {
            handle_table(node, path);
        } else if (node.name == "w:sdt") {
            if (sdt_is_toc(node)) {
                emit(SourceKind::TocBlock, path, text_of(node), StyleSignature{}, true);
            } else if (sdt_is_form_control(node)) {
                emit(SourceKind::FormTagBlock, path, text_of(node), StyleSignature{}, true);
            } else if (const auto* content = node.child("w:sdtContent")) {
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    if (&node.children[i] != content) continue;
                    path.push_back(i);
                    walk_blocks(*content, path, paragraph_kind);
                    path.pop_back();
                }
            }
        }
    }

    void walk_blocks(const xml::Node& parent, std::vector<std::size_t>& path,
                     SourceKind paragraph_kind) {
        for (std::size_t i = 0; i < parent.children.size(); ++i) {
            const xml::Node& child = parent.children[i];
            if (!child.is_element()) continue;
            path.push_back(i);
            handle_block(child, path, paragraph_kind);
            path.pop_back();
        }
    }
};

}  // namespace

std::string_view source_kind_name(SourceKind k) { return kSourceKindNames[int(k)]; }

std::optional<SourceKind> source_kind_from_name(std::string_view name) {
    for (int i = 0; i < int(std::size(kSourceKindNames)); ++i)
        if (kSourceKindNames[i] == name) return SourceKind(i);
    return std::nullopt;
}

DocumentModel extract_elements(const Container& container, const std::string& source_hash) {
    DocumentModel model;
    model.source_hash = source_hash;

    StyleRegistry styles;
    if (container.has_part("word/styles.xml"))
        styles = StyleRegistry::from_styles_part(container.parse_part("word/styles.xml"));

    // Main body.
    xml::Node doc = container.parse_part(container.main_part());
    Walker walker{container, styles, model, container.main_part(), true};
    for (std::size_t i = 0; i < doc.children.size(); ++i) {
        if (doc.children[i].name != "w:body") continue;
        std::vector<std::size_t> path{i};
        walker.walk_blocks(doc.children[i], path, SourceKind::BodyParagraph);
    }

    auto walk_part = [&](const std::string& part, SourceKind kind) {
        xml::Node root = container.parse_part(part);
        Walker w{container, styles, model, part, false};
        std::vector<std::size_t> path;
        w.walk_blocks(root, path, kind);
    };
    for (const auto& part : container.related_parts("/header"))
        if (container.has_part(part)) walk_part(part, SourceKind::HeaderParagraph);
    for (const auto& part : container.related_parts("/footer"))
        if (container.has_part(part)) walk_part(part, SourceKind::FooterParagraph);

    // Footnotes and comments live one level deeper (w:footnote / w:comment).
    auto walk_notes = [&](const std::string& part, std::string_view wrapper, SourceKind kind) {
        xml::Node root = container.parse_part(part);
        Walker w{container, styles, model, part, false};
        for (std::size_t i = 0; i < root.children.size(); ++i) {
            const xml::Node& note = root.children[i];
            if (note.name != wrapper) continue;
            if (auto type = note.attr("w:type");
                type && (*type == "separator" || *type == "continuationSeparator"))
                continue;
            std::vector<std::size_t> path{i};
            w.walk_blocks(note, path, kind);
        }
    };
    for (const auto& part : container.related_parts("/footnotes"))
        if (container.has_part(part)) walk_notes(part, "w:footnote", SourceKind::FootnoteParagraph);
    for (const auto& part : container.related_parts("/comments"))
        if (container.has_part(part)) walk_notes(part, "w:comment", SourceKind::CommentParagraph);

    for (std::size_t i = 0; i < model.elements.size(); ++i)
        model.elements[i].element_id = int(i);
    return model;
}

DocumentModel build_model(const Container& container, const std::string& source_hash) {
    DocumentModel model = extract_elements(container, source_hash);
    StyleRegistry styles;
    if (container.has_part("word/styles.xml"))
        styles = StyleRegistry::from_styles_part(container.parse_part("word/styles.xml"));
    classify_elements(model, styles);
    return model;
}

std::vector<TableModel> parse_tables(const Container& container) {
    return extract_elements(container, "").tables;
}

std::string extract_doc_text(const DocumentModel& model) {
    std::string out;
    for (const auto& e : model.elements) {
        if (!e.in_body || e.text.empty()) continue;
        if (!out.empty()) out += '\n';
        out += e.text;
    }
    return out;
}

std::string model_to_json(const DocumentModel& model) {
    nlohmann::json j;
    j["source_hash"] = model.source_hash;
    j["page_count"] = model.page_count;
    j["malformed_tables"] = model.malformed_tables;
    j["unmapped_styles"] = model.unmapped_styles;
    auto elements = nlohmann::json::array();
    for (const auto& e : model.elements) {
        nlohmann::json je{
            {"element_id", e.element_id},
            {"category", category_name(e.category)},
            {"provenance", provenance_name(e.provenance)},
            {"text", e.text},
            {"char_count", e.char_count},
            {"styling",
             {{"font_size", e.styling.font_size_half_points},
              {"bold", e.styling.bold},
              {"underline", e.styling.underline},
              {"italic", e.styling.italic}}},
            {"part", e.part},
            {"xml_locator", e.xml_locator},
            {"source", source_kind_name(e.source)},
            {"in_body", e.in_body},
        };
        if (e.styling.style_name) je["styling"]["style_name"] = *e.styling.style_name;
        if (e.table_index >= 0) je["table_index"] = e.table_index;
        if (e.cell_index >= 0) je["cell_index"] = e.cell_index;
        if (!e.image_rel_id.empty()) je["image_rel_id"] = e.image_rel_id;
        elements.push_back(std::move(je));
    }
    j["elements"] = std::move(elements);
    auto tables = nlohmann::json::array();
    for (const auto& t : model.tables) {
        nlohmann::json jt{{"rows", t.rows},
                          {"cols", t.cols},
                          {"xml_locator", t.xml_locator},
                          {"header_rows", t.header_rows}};
        auto cells = nlohmann::json::array();
        for (const auto& c : t.cells) {
            cells.push_back({{"cell_id", c.cell_id},
                             {"row", c.row_index},
                             {"col", c.col_index},
                             {"row_span", c.row_span},
                             {"col_span", c.col_span},
                             {"header", c.is_header_cell},
                             {"text", c.text},
                             {"xml_locator", c.xml_locator}});
        }
        jt["cells"] = std::move(cells);
        tables.push_back(std::move(jt));
    }
    j["tables"] = std::move(tables);
    return j.dump(2) + "\n";
}

DocumentModel model_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    DocumentModel model;
    model.source_hash = j.value("source_hash", "");
    model.page_count = j.value("page_count", 0);
    model.malformed_tables = j.value("malformed_tables", std::size_t(0));
    if (j.contains("unmapped_styles"))
        model.unmapped_styles = j["unmapped_styles"].get<std::vector<std::string>>();
    for (const auto& je : j["elements"]) {
        DocElement e;
        e.element_id = je["element_id"].get<int>();
        e.category = category_from_name(je["category"].get<std::string>())
                         .value_or(Category::PlainText);
        e.provenance = provenance_from_name(je["provenance"].get<std::string>())
                           .value_or(Provenance::FallbackPlainText);
        e.classified = true;
        e.text = je["text"].get<std::string>();
        e.char_count = je["char_count"].get<std::size_t>();
        const auto& styling = je["styling"];
        e.styling.font_size_half_points = styling["font_size"].get<int>();
        e.styling.bold = styling["bold"].get<bool>();
        e.styling.underline = styling["underline"].get<bool>();
        e.styling.italic = styling["italic"].get<bool>();
        if (styling.contains("style_name"))
            e.styling.style_name = styling["style_name"].get<std::string>();
        e.part = je["part"].get<std::string>();
        e.xml_locator = je["xml_locator"].get<std::string>();
        e.source = source_kind_from_name(je["source"].get<std::string>())
                       .value_or(SourceKind::BodyParagraph);
        e.in_body = je["in_body"].get<bool>();
        e.table_index = je.value("table_index", -1);
        e.cell_index = je.value("cell_index", -1);
        e.image_rel_id = je.value("image_rel_id", "");
        model.elements.push_back(std::move(e));
    }
    for (const auto& jt : j["tables"]) {
        TableModel t;
        t.rows = jt["rows"].get<int>();
        t.cols = jt["cols"].get<int>();
        t.xml_locator = jt["xml_locator"].get<std::string>();
        t.header_rows = jt["header_rows"].get<std::vector<bool>>();
        for (const auto& jc : jt["cells"]) {
            TableCellModel c;
            c.cell_id = jc["cell_id"].get<int>();
            c.row_index = jc["row"].get<int>();
            c.col_index = jc["col"].get<int>();
            c.row_span = jc["row_span"].get<int>();
            c.col_span = jc["col_span"].get<int>();
            c.is_header_cell = jc["header"].get<bool>();
            c.text = jc["text"].get<std::string>();
            c.xml_locator = jc["xml_locator"].get<std::string>();
            t.cells.push_back(std::move(c));
        }
        model.tables.push_back(std::move(t));
    }
    return model;
}

}  // namespace dh::docx
