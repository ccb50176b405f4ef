#include "dh/annotate/annotator.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "dh/core/utf8.hpp"

namespace dh::annotate {

namespace {

bool center_inside(const Rect& inner, const Rect& outer) {
    int cx = inner.x + inner.w / 2;
    int cy = inner.y + inner.h / 2;
    return cx >= outer.x && cx < outer.right() && cy >= outer.y && cy < outer.bottom();
}

void backlink_elements(std::vector<PageAnnotation>& pages, const docx::DocumentModel& model) {
    // Per category: detected boxes in (page, y, x) order paired with elements
    // in document order. Header/Footer repeat per page, so they are skipped.
    std::map<docx::Category, std::vector<BoxAnnotation*>> boxes_by_cat;
    for (auto& page : pages)
        for (auto& b : page.boxes) boxes_by_cat[b.category].push_back(&b);
    std::map<docx::Category, std::vector<int>> elements_by_cat;
    for (const auto& e : model.elements) elements_by_cat[e.category].push_back(e.element_id);

    for (auto& [cat, box_list] : boxes_by_cat) {
        if (cat == docx::Category::Header || cat == docx::Category::Footer) continue;
        if (cat == docx::Category::TableRow || cat == docx::Category::TableColumn) continue;
        auto it = elements_by_cat.find(cat);
        if (it == elements_by_cat.end()) continue;
        const auto& els = it->second;
        if (els.size() != box_list.size()) continue;  // ambiguous, leave unset
        for (std::size_t i = 0; i < els.size(); ++i) box_list[i]->element_id = els[i];
    }
}

}  // namespace

std::string_view doc_status_name(DocStatus s) {
    switch (s) {
        case DocStatus::Annotated: return "Annotated";
        case DocStatus::Rejected: return "Rejected";
        case DocStatus::Failed: return "Failed";
    }
    return "Failed";
}

void append_table_grids(std::vector<BoxAnnotation>& boxes) {
    std::vector<Rect> tables;
    for (const auto& b : boxes)
        if (b.category == docx::Category::Table) tables.push_back(b.box);
    for (const auto& table : tables) {
        std::vector<Rect> cells;
        for (const auto& b : boxes) {
            if ((b.category == docx::Category::TableCell ||
                 b.category == docx::Category::TableHeaderCell) &&
                center_inside(b.box, table))
                cells.push_back(b.box);
        }
        if (cells.empty()) continue;
        TableGrid grid = derive_table_grid(table, std::move(cells));
        for (const auto& row : grid.row_boxes)
            boxes.push_back(BoxAnnotation{docx::Category::TableRow, row, std::nullopt});
        for (const auto& col : grid.col_boxes)
            boxes.push_back(BoxAnnotation{docx::Category::TableColumn, col, std::nullopt});
    }
}

DocAnnotation annotate_document(const Bytes& docx_bytes, Renderer& renderer,
                                const AnnotateParams& params) {
    DocAnnotation out;
    docx::Container container;
    try {
        container = docx::Container::open(docx_bytes);
    } catch (const docx::ZipBomb&) {
        out.status = DocStatus::Rejected;
        out.reason = "ZipBomb";
        return out;
    } catch (const docx::OversizeImage&) {
        out.status = DocStatus::Rejected;
        out.reason = "OversizeImage";
        return out;
    } catch (const docx::InvalidZip&) {
        out.status = DocStatus::Rejected;
        out.reason = "InvalidZip";
        return out;
    }

    try {
        out.model = docx::build_model(container, "");
    } catch (const Error& e) {
        out.status = DocStatus::Failed;
        out.reason = std::string("Internal: ") + e.what();
        return out;
    }

    std::string doc_text = docx::extract_doc_text(out.model);
    if (utf8_length(doc_text) < docx::kMinDocumentChars) {
        out.status = DocStatus::Rejected;
        out.reason = "TextTooShort";
        return out;
    }

    ColorizeResult colorized;
    try {
        colorized = colorize(container, out.model, params.colors);
    } catch (const Error& e) {
        out.status = DocStatus::Failed;
        out.reason = std::string("Internal: ") + e.what();
        return out;
    }
    out.colorize_failures = colorized.failed;

    RenderResult rendered = renderer.render(colorized.container_bytes, params.render);
    switch (rendered.status) {
        case RenderStatus::TooManyPages:
            out.status = DocStatus::Rejected;
            out.reason = "TooManyPages";
            out.model.page_count = rendered.page_count;
            return out;
        case RenderStatus::Crashed:
            out.status = DocStatus::Failed;
            out.reason = "RenderCrash";
            return out;
        case RenderStatus::Timeout:
            out.status = DocStatus::Failed;
            out.reason = "RenderTimeout";
            return out;
        case RenderStatus::Ok:
            break;
    }
    out.model.page_count = int(rendered.pages.size());

    for (int p = 0; p < int(rendered.pages.size()); ++p) {
        const Image& image = rendered.pages[std::size_t(p)];
        PageAnnotation page;
        page.page_index = p;
        page.width = image.width();
        page.height = image.height();
        auto detected = detect_bboxes(image, params.colors, params.detect);
        page.boxes.reserve(detected.size());
        for (const auto& d : detected)
            page.boxes.push_back(BoxAnnotation{d.category, d.box, std::nullopt});
        append_table_grids(page.boxes);
        PageTextResult text = extract_page_text(rendered.pdf, p, params.render.dpi);
        page.page_text = std::move(text.page_text);
        page.words = std::move(text.words);
        page.pdf_unsupported = text.unsupported_feature;
        out.pages.push_back(std::move(page));
    }
    backlink_elements(out.pages, out.model);
    out.page_images = std::move(rendered.pages);
    out.status = DocStatus::Annotated;
    return out;
}

std::string pages_to_json(const std::vector<PageAnnotation>& pages) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& page : pages) {
        nlohmann::json jp{{"page_index", page.page_index},
                          {"width", page.width},
                          {"height", page.height},
                          {"page_text", page.page_text},
                          {"pdf_unsupported", page.pdf_unsupported}};
        auto boxes = nlohmann::json::array();
        for (const auto& b : page.boxes) {
            nlohmann::json jb{{"category", docx::category_name(b.category)},
                              {"x", b.box.x},
                              {"y", b.box.y},
                              {"w", b.box.w},
                              {"h", b.box.h}};
            if (b.element_id) jb["element_id"] = *b.element_id;
            boxes.push_back(std::move(jb));
        }
        jp["boxes"] = std::move(boxes);
        auto words = nlohmann::json::array();
        for (const auto& w : page.words)
            words.push_back({{"text", w.text},
                             {"x", w.box.x},
                             {"y", w.box.y},
                             {"w", w.box.w},
                             {"h", w.box.h}});
        jp["words"] = std::move(words);
        if (page.page_language)
            jp["page_language"] = {{"code", page.page_language->code},
                                   {"confidence", page.page_language->confidence}};
        else
            jp["page_language"] = nullptr;
        arr.push_back(std::move(jp));
    }
    return arr.dump(2) + "\n";
}

std::vector<PageAnnotation> pages_from_json(const std::string& text) {
    std::vector<PageAnnotation> out;
    nlohmann::json arr = nlohmann::json::parse(text);
    for (const auto& jp : arr) {
        PageAnnotation page;
        page.page_index = jp["page_index"].get<int>();
        page.width = jp["width"].get<int>();
        page.height = jp["height"].get<int>();
        page.page_text = jp["page_text"].get<std::string>();
        page.pdf_unsupported = jp.value("pdf_unsupported", false);
        for (const auto& jb : jp["boxes"]) {
            BoxAnnotation b;
            b.category = docx::category_from_name(jb["category"].get<std::string>())
                             .value_or(docx::Category::PlainText);
            b.box = Rect{jb["x"].get<int>(), jb["y"].get<int>(), jb["w"].get<int>(),
                         jb["h"].get<int>()};
            if (jb.contains("element_id")) b.element_id = jb["element_id"].get<int>();
            page.boxes.push_back(b);
        }
        for (const auto& jw : jp["words"]) {
            PageWord w;
            w.text = jw["text"].get<std::string>();
            w.box = Rect{jw["x"].get<int>(), jw["y"].get<int>(), jw["w"].get<int>(),
                         jw["h"].get<int>()};
            page.words.push_back(std::move(w));
        }
        if (jp.contains("page_language") && jp["page_language"].is_object())
            page.page_language = LanguageTag{jp["page_language"]["code"].get<std::string>(),
                                             jp["page_language"]["confidence"].get<double>()};
        out.push_back(std::move(page));
    }
    return out;
}

}  // namespace dh::annotate
