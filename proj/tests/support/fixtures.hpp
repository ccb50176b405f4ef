#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dh/core/bytes.hpp"
#include "dh/core/image.hpp"

namespace dh::test {

// ---------------------------------------------------------------------------
// docx fixtures
// ---------------------------------------------------------------------------

struct ParaOpts {
    std::string style;                       // pStyle id ("" = none)
    std::optional<int> size_half_points;     // direct run formatting
    std::optional<bool> bold;
    std::optional<bool> underline;
    std::optional<bool> italic;
    std::optional<std::string> highlight;    // pre-existing w:highlight value
};

struct MergeSpec {
    int row = 0;
    int col = 0;
    int row_span = 1;
    int col_span = 1;
};

struct TableSpec {
    int rows = 2;
    int cols = 2;
    bool header_row = false;
    std::vector<MergeSpec> merges;
    std::function<std::string(int, int)> cell_text;  // nullptr: "r{r}c{c}"
};

struct StyleSpec {
    std::string id;
    std::string based_on;
    std::optional<int> size_half_points;
    std::optional<bool> bold;
    std::optional<bool> underline;
    std::optional<bool> italic;
};

// Assembles a real zip-of-XML word processing container.
class DocxBuilder {
public:
    DocxBuilder& style(const StyleSpec& spec);
    DocxBuilder& paragraph(const std::string& text, const ParaOpts& opts = {});
    DocxBuilder& table(const TableSpec& spec);
    DocxBuilder& figure_png(int width, int height, Rgb color = {40, 90, 200});
    DocxBuilder& textbox(const std::string& text);
    DocxBuilder& equation();
    DocxBuilder& formtext_paragraph(const std::string& label);
    DocxBuilder& form_tag_block(const std::string& text);
    DocxBuilder& toc_block(const std::string& text);
    DocxBuilder& header_text(const std::string& text);
    DocxBuilder& footer_text(const std::string& text);
    DocxBuilder& footnote(const std::string& text);
    DocxBuilder& comment(const std::string& text);
    DocxBuilder& raw_body_xml(const std::string& xml);
    // Extra zip entry (e.g. an injected vbaProject.bin).
    DocxBuilder& extra_entry(const std::string& name, const std::string& content);
    DocxBuilder& extra_entry(const std::string& name, BytesView content);
    DocxBuilder& external_relationship(const std::string& type, const std::string& target);

    Bytes build() const;

private:
    struct Media {
        std::string name;
        Bytes bytes;
        std::string rel_id;
    };
    std::string body_;
    std::vector<StyleSpec> styles_;
    std::vector<Media> media_;
    std::vector<std::string> headers_;
    std::vector<std::string> footers_;
    std::vector<std::string> footnotes_;
    std::vector<std::string> comments_;
    std::vector<std::pair<std::string, Bytes>> extra_entries_;
    std::vector<std::pair<std::string, std::string>> external_rels_;
    int next_rel_ = 100;
};

std::string xml_escape_text(const std::string& s);

// Fluent shortcut: a paragraph-heavy document guaranteed to clear the 200
// character floor.
Bytes simple_docx(const std::vector<std::string>& paragraphs);

// Incompressible-ish filler so large fixtures stay under the zip-bomb ratio.
std::string random_letters(std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// WAT fixtures
// ---------------------------------------------------------------------------

struct WatRecordSpec {
    std::string warc_type = "metadata";  // metadata | request | response ...
    std::string target_uri;
    std::vector<std::string> links;
    std::string raw_payload;  // when set, used verbatim
};

// One gzip member per record, matching the crawl archive layout.
Bytes build_wat(const std::vector<WatRecordSpec>& records);
std::string build_warc_record(const WatRecordSpec& record);

// ---------------------------------------------------------------------------
// CFB fixtures
// ---------------------------------------------------------------------------

struct CfbItemSpec {
    std::string name;
    bool is_storage = false;
    Bytes stream;  // streams only
};

// Minimal compound file: 512-byte sectors, no mini stream (cutoff 0).
Bytes build_cfb(const std::vector<CfbItemSpec>& items);

// A legacy .doc skeleton: WordDocument stream with the FIB flag word.
Bytes build_legacy_doc(bool encrypted_bit, bool with_object_pool = false,
                       bool with_macros = false);

}  // namespace dh::test
