#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dh/docx/category.hpp"
#include "dh/docx/container.hpp"
#include "dh/docx/style.hpp"

namespace dh::docx {

// Where an element came from in the XML; drives the XmlTag pass and the
// renderer-facing structure.
enum class SourceKind {
    BodyParagraph,
    TextBoxParagraph,
    Table,
    TableCell,
    HeaderRow,       // w:tr marked w:tblHeader
    Figure,
    Equation,
    HeaderParagraph,
    FooterParagraph,
    FootnoteParagraph,
    CommentParagraph,
    TocBlock,
    FormFieldParagraph,  // legacy FORMTEXT field
    FormTagBlock,        // content control (w:sdt)
};

std::string_view source_kind_name(SourceKind k);
std::optional<SourceKind> source_kind_from_name(std::string_view name);

struct StyleSignature {
    int font_size_half_points = 22;
    bool bold = false;
    bool underline = false;
    bool italic = false;
    std::optional<std::string> style_name;

    bool operator==(const StyleSignature&) const = default;
    // Applied-styling comparison for the heuristic style-match pass: the
    // style name is deliberately not part of it (a copy-pasted heading has
    // the formatting but not the name).
    bool format_equals(const StyleSignature& o) const {
        return font_size_half_points == o.font_size_half_points && bold == o.bold &&
               underline == o.underline && italic == o.italic;
    }
};

struct DocElement {
    int element_id = 0;
    Category category = Category::PlainText;
    Provenance provenance = Provenance::FallbackPlainText;
    bool classified = false;
    std::string text;
    std::size_t char_count = 0;  // Unicode scalar values
    StyleSignature styling;
    std::string part;         // container part the element lives in
    std::string xml_locator;  // child-index path within the part
    SourceKind source = SourceKind::BodyParagraph;
    bool in_body = false;     // participates in document-level text
    int table_index = -1;     // Table elements and cells
    int cell_index = -1;      // cells only
    std::string image_rel_id; // figures only
};

struct TableCellModel {
    int cell_id = 0;
    int row_index = 0;
    int col_index = 0;
    int row_span = 1;
    int col_span = 1;
    bool is_header_cell = false;
    std::string text;
    std::string xml_locator;
};

struct TableModel {
    std::vector<TableCellModel> cells;
    int rows = 0;
    int cols = 0;
    std::string xml_locator;
    std::vector<bool> header_rows;  // per row
};

struct DocumentModel {
    std::vector<DocElement> elements;  // XML document order
    std::vector<TableModel> tables;
    std::string source_hash;
    int page_count = 0;  // filled after rendering
    std::size_t malformed_tables = 0;
    std::vector<std::string> unmapped_styles;
};

// Parses the container into unclassified elements plus table models, then
// runs the classification passes. Deterministic for identical bytes.
DocumentModel build_model(const Container& container, const std::string& source_hash);

// Individual steps, exposed for tests.
DocumentModel extract_elements(const Container& container, const std::string& source_hash);
void classify_elements(DocumentModel& model, const StyleRegistry& styles);
std::vector<TableModel> parse_tables(const Container& container);

// Concatenated element text for in-body elements, LF-separated.
std::string extract_doc_text(const DocumentModel& model);

// Minimum accepted document text length in Unicode scalar values.
constexpr std::size_t kMinDocumentChars = 200;

std::string model_to_json(const DocumentModel& model);
DocumentModel model_from_json(const std::string& json_text);

}  // namespace dh::docx
