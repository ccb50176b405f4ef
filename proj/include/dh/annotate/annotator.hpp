#pragma once

#include <optional>

#include "dh/annotate/colorize.hpp"
#include "dh/annotate/detect.hpp"
#include "dh/annotate/pdf_text.hpp"
#include "dh/annotate/renderer.hpp"
#include "dh/annotate/table_grid.hpp"
#include "dh/docx/model.hpp"

namespace dh::annotate {

struct BoxAnnotation {
    docx::Category category;
    Rect box;
    std::optional<int> element_id;  // best-effort back-link
};

struct LanguageTag {
    std::string code;
    double confidence = 0;
};

struct PageAnnotation {
    int page_index = 0;
    int width = 0;
    int height = 0;
    std::vector<BoxAnnotation> boxes;
    std::vector<PageWord> words;
    std::string page_text;
    std::optional<LanguageTag> page_language;
    bool pdf_unsupported = false;
};

struct AnnotateParams {
    DetectParams detect;
    RenderOptions render;
    ColorMap colors;
};

enum class DocStatus { Annotated, Rejected, Failed };

std::string_view doc_status_name(DocStatus s);

struct DocAnnotation {
    DocStatus status = DocStatus::Failed;
    std::string reason;  // ZipBomb, OversizeImage, InvalidZip, TextTooShort,
                         // TooManyPages, RenderCrash, RenderTimeout, Internal
    docx::DocumentModel model;
    std::vector<PageAnnotation> pages;
    std::vector<Image> page_images;
    std::size_t colorize_failures = 0;
};

// The whole per-document path: screen, classify, colorize, render, detect,
// derive table grids, extract page text. A rejected document yields zero
// page annotations.
DocAnnotation annotate_document(const Bytes& docx_bytes, Renderer& renderer,
                                const AnnotateParams& params);

// Groups detected cell boxes under each detected table region and appends the
// derived TableRow / TableColumn boxes.
void append_table_grids(std::vector<BoxAnnotation>& boxes);

std::string pages_to_json(const std::vector<PageAnnotation>& pages);
std::vector<PageAnnotation> pages_from_json(const std::string& text);

}  // namespace dh::annotate
