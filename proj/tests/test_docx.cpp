#include <doctest.h>

#include <random>

#include "dh/core/sha256.hpp"
#include "dh/core/utf8.hpp"
#include "dh/core/zip.hpp"
#include "dh/docx/model.hpp"
#include "fixtures.hpp"

using namespace dh;
using namespace dh::docx;

namespace {

DocumentModel model_of(const Bytes& bytes) {
    auto container = Container::open(bytes);
    return build_model(container, Sha256::hex_digest(bytes));
}

const DocElement* find_text(const DocumentModel& m, const std::string& text) {
    for (const auto& e : m.elements)
        if (e.text == text) return &e;
    return nullptr;
}

}  // namespace

TEST_CASE("container screens zip bombs by the 20x ratio") {
    // Highly compressible payload: compressed archive far smaller than the
    // declared uncompressed total.
    zip::Writer writer;
    writer.add("word/document.xml", std::string_view("<w:document><w:body/></w:document>"));
    writer.add("pad.bin", std::string(200000, 'a'));
    Bytes bomb = writer.finish();
    CHECK_THROWS_AS((void)Container::open(bomb), ZipBomb);

    // Same payload stored uncompressed: ratio close to 1.
    zip::Writer ok_writer;
    ok_writer.add("word/document.xml",
                  std::string_view("<w:document><w:body/></w:document>"), false);
    ok_writer.add("pad.bin", std::string(200000, 'a'), false);
    CHECK_NOTHROW((void)Container::open(ok_writer.finish()));

    CHECK_THROWS_AS((void)Container::open(to_bytes("not a zip at all")), InvalidZip);
}

TEST_CASE("container rejects oversize image headers without decoding") {
    // 5000x5000 = 25M pixels: header-only PNG (no valid pixel data needed).
    Bytes fake_png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n',
                      0, 0, 0, 13, 'I', 'H', 'D', 'R',
                      0, 0, 0x13, 0x88, 0, 0, 0x13, 0x88,  // 5000 x 5000
                      8, 2, 0, 0, 0, 0, 0, 0, 0};
    auto doc = test::DocxBuilder{}.paragraph("x").extra_entry("word/media/huge.png",
                                                              BytesView(fake_png));
    CHECK_THROWS_AS((void)Container::open(doc.build()), OversizeImage);
}

TEST_CASE("builtin styles classify directly") {
    test::DocxBuilder builder;
    builder.style({"Heading2", "", 26, true, {}, {}});
    builder.style({"Caption", "", 18, {}, {}, true});
    builder.style({"MyBody", "", 24, {}, {}, {}});
    builder.paragraph("A heading", {.style = "Heading2"});
    builder.paragraph("A caption", {.style = "Caption"});
    builder.paragraph("Custom styled", {.style = "MyBody", .size_half_points = 24});
    auto model = model_of(builder.build());

    auto* heading = find_text(model, "A heading");
    REQUIRE(heading);
    CHECK(heading->category == Category::Heading2);
    CHECK(heading->provenance == Provenance::BuiltinStyle);

    auto* caption = find_text(model, "A caption");
    REQUIRE(caption);
    CHECK(caption->category == Category::TableCaption);

    auto* custom = find_text(model, "Custom styled");
    REQUIRE(custom);
    CHECK(custom->provenance != Provenance::BuiltinStyle);
    CHECK(std::find(model.unmapped_styles.begin(), model.unmapped_styles.end(), "MyBody") !=
          model.unmapped_styles.end());
}

TEST_CASE("xml tags classify structural elements") {
    test::DocxBuilder builder;
    builder.paragraph(std::string(220, 'x'));
    builder.table({2, 2, false, {}, nullptr});
    builder.textbox("boxed text");
    builder.figure_png(40, 30);
    builder.equation();
    builder.toc_block("contents listing");
    builder.form_tag_block("choose one");
    builder.formtext_paragraph("Name:");
    builder.header_text("page header");
    builder.footer_text("page footer");
    builder.footnote("a footnote");
    builder.comment("a comment");
    auto model = model_of(builder.build());

    auto count = [&](Category c) {
        std::size_t n = 0;
        for (const auto& e : model.elements) n += e.category == c ? 1 : 0;
        return n;
    };
    CHECK(count(Category::Table) == 1);
    CHECK(count(Category::TableCell) == 4);
    CHECK(count(Category::Figure) == 1);
    CHECK(count(Category::Equation) == 1);
    CHECK(count(Category::TableOfContents) == 1);
    CHECK(count(Category::FormTag) == 1);
    CHECK(count(Category::FormField) == 1);
    CHECK(count(Category::Header) == 1);
    CHECK(count(Category::Footer) == 1);
    CHECK(count(Category::Footnote) == 1);
    CHECK(count(Category::Annotation) == 1);

    auto* boxed = find_text(model, "boxed text");
    REQUIRE(boxed);
    CHECK(boxed->category == Category::PlainText);  // text boxes relabel as plain text
    CHECK(boxed->provenance == Provenance::XmlTag);
}

TEST_CASE("style match pass catches copy-pasted headings") {
    test::DocxBuilder builder;
    builder.style({"Heading1", "", 32, true, {}, {}});
    builder.paragraph("Real heading", {.style = "Heading1"});
    // Copy-paste: same applied styling, no style name.
    builder.paragraph("Pasted heading", {.size_half_points = 32, .bold = true});
    builder.paragraph("Body text long enough to stay plain",
                      {.size_half_points = 22});
    auto model = model_of(builder.build());

    auto* pasted = find_text(model, "Pasted heading");
    REQUIRE(pasted);
    CHECK(pasted->category == Category::Heading1);
    CHECK(pasted->provenance == Provenance::HeuristicStyleMatch);

    auto* body = find_text(model, "Body text long enough to stay plain");
    REQUIRE(body);
    CHECK(body->category == Category::PlainText);
}

TEST_CASE("style match tie breaks by most frequent category") {
    test::DocxBuilder builder;
    builder.style({"Heading1", "", 30, true, {}, {}});
    builder.style({"Quote", "", 30, true, {}, {}});
    builder.paragraph("h one a", {.style = "Heading1"});
    builder.paragraph("h one b", {.style = "Heading1"});
    builder.paragraph("h one c", {.style = "Heading1"});
    builder.paragraph("quoted", {.style = "Quote"});
    builder.paragraph("ambiguous", {.size_half_points = 30, .bold = true});
    auto model = model_of(builder.build());
    auto* ambiguous = find_text(model, "ambiguous");
    REQUIRE(ambiguous);
    CHECK(ambiguous->category == Category::Heading1);  // 3 votes beat 1
}

TEST_CASE("content heuristics: lists and form fields") {
    test::DocxBuilder builder;
    builder.paragraph("1. a\n2. b\n3. c");
    builder.paragraph("\xe2\x80\xa2 x\n\xe2\x80\xa2 y");  // bullet chars
    builder.paragraph("Name: ________");
    builder.paragraph("plain sentence");
    auto model = model_of(builder.build());

    CHECK(find_text(model, "1. a\n2. b\n3. c")->category == Category::ListItem);
    CHECK(find_text(model, "\xe2\x80\xa2 x\n\xe2\x80\xa2 y")->category == Category::ListItem);
    auto* form = find_text(model, "Name: ________");
    REQUIRE(form);
    CHECK(form->category == Category::FormField);
    CHECK(form->provenance == Provenance::HeuristicContent);
    CHECK(find_text(model, "plain sentence")->category == Category::PlainText);
}

TEST_CASE("font rank: sizes above the mode become headings") {
    test::DocxBuilder builder;
    // Two elements per size so no signature is unique (no Title).
    builder.paragraph("big one", {.size_half_points = 40});
    builder.paragraph("big two", {.size_half_points = 40});
    builder.paragraph("mid one", {.size_half_points = 32});
    builder.paragraph("mid two", {.size_half_points = 32});
    for (int i = 0; i < 4; ++i)
        builder.paragraph("body " + std::to_string(i), {.size_half_points = 24});
    auto model = model_of(builder.build());

    CHECK(find_text(model, "big one")->category == Category::Heading1);
    CHECK(find_text(model, "big two")->category == Category::Heading1);
    CHECK(find_text(model, "mid one")->category == Category::Heading2);
    CHECK(find_text(model, "body 0")->category == Category::PlainText);
    CHECK(find_text(model, "big one")->provenance == Provenance::HeuristicFontRank);
}

TEST_CASE("font rank: all same size means all plain text") {
    test::DocxBuilder builder;
    for (int i = 0; i < 3; ++i)
        builder.paragraph("same " + std::to_string(i), {.size_half_points = 22});
    auto model = model_of(builder.build());
    for (int i = 0; i < 3; ++i)
        CHECK(find_text(model, "same " + std::to_string(i))->category == Category::PlainText);
}

TEST_CASE("font rank: long candidates demote to plain text") {
    test::DocxBuilder builder;
    builder.paragraph(std::string(250, 'h'), {.size_half_points = 40});
    builder.paragraph("other big", {.size_half_points = 40});
    builder.paragraph("body a", {.size_half_points = 24});
    builder.paragraph("body b", {.size_half_points = 24});
    auto model = model_of(builder.build());
    CHECK(find_text(model, std::string(250, 'h'))->category == Category::PlainText);
    CHECK(find_text(model, "other big")->category == Category::Heading1);
}

TEST_CASE("title requires a unique signature at the single largest size") {
    test::DocxBuilder builder;
    builder.paragraph("The Document Title", {.size_half_points = 44, .bold = true});
    builder.paragraph("sub one", {.size_half_points = 30});
    builder.paragraph("sub two", {.size_half_points = 30});
    builder.paragraph("body a", {.size_half_points = 22});
    builder.paragraph("body b", {.size_half_points = 22});
    auto model = model_of(builder.build());
    CHECK(find_text(model, "The Document Title")->category == Category::Title);
    CHECK(find_text(model, "sub one")->category == Category::Heading2);
}

TEST_CASE("pass precedence is strict: earlier passes win") {
    test::DocxBuilder builder;
    builder.style({"Heading1", "", 32, true, {}, {}});
    // A built-in style on list-looking text: BuiltinStyle beats the content
    // heuristic.
    builder.paragraph("1. a\n2. b", {.style = "Heading1"});
    // Applied styling identical to the builtin heading, also list-looking:
    // the style-match pass runs before the content pass.
    builder.paragraph("3. c\n4. d", {.size_half_points = 32, .bold = true});
    // Plain list text still classifies by content.
    builder.paragraph("5. e\n6. f");
    auto model = model_of(builder.build());

    auto* styled = find_text(model, "1. a\n2. b");
    REQUIRE(styled);
    CHECK(styled->category == Category::Heading1);
    CHECK(styled->provenance == Provenance::BuiltinStyle);

    auto* matched = find_text(model, "3. c\n4. d");
    REQUIRE(matched);
    CHECK(matched->category == Category::Heading1);
    CHECK(matched->provenance == Provenance::HeuristicStyleMatch);

    auto* list = find_text(model, "5. e\n6. f");
    REQUIRE(list);
    CHECK(list->category == Category::ListItem);
    CHECK(list->provenance == Provenance::HeuristicContent);
}

TEST_CASE("classification is total with exactly one provenance") {
    auto corpus = test::DocxBuilder{};
    corpus.style({"Heading1", "", 32, true, {}, {}});
    corpus.paragraph("heading", {.style = "Heading1"});
    corpus.table({2, 3, true, {}, nullptr});
    corpus.figure_png(30, 20);
    corpus.paragraph("");
    corpus.paragraph("1. x\n2. y");
    auto model = model_of(corpus.build());
    for (const auto& e : model.elements) {
        CHECK(e.classified);
        CHECK(int(e.category) >= 0);
        CHECK(int(e.category) < kCategoryCount);
        CHECK(e.category != Category::TableRow);
        CHECK(e.category != Category::TableColumn);
    }
}

TEST_CASE("tables: plain grid and merges") {
    auto plain = model_of(test::DocxBuilder{}.table({2, 2, false, {}, nullptr}).build());
    REQUIRE(plain.tables.size() == 1);
    CHECK(plain.tables[0].rows == 2);
    CHECK(plain.tables[0].cols == 2);
    CHECK(plain.tables[0].cells.size() == 4);
    for (const auto& c : plain.tables[0].cells) {
        CHECK(c.row_span == 1);
        CHECK(c.col_span == 1);
    }

    // Vertical merge in column 0.
    auto vmerge = model_of(
        test::DocxBuilder{}.table({2, 2, false, {{0, 0, 2, 1}}, nullptr}).build());
    REQUIRE(vmerge.tables.size() == 1);
    CHECK(vmerge.tables[0].cells.size() == 3);
    const auto& merged = vmerge.tables[0].cells[0];
    CHECK(merged.row_span == 2);
    CHECK(merged.col_span == 1);

    // Horizontal span.
    auto hspan = model_of(
        test::DocxBuilder{}.table({2, 2, false, {{0, 0, 1, 2}}, nullptr}).build());
    CHECK(hspan.tables[0].cells.size() == 3);
    CHECK(hspan.tables[0].cells[0].col_span == 2);
}

TEST_CASE("table grid occupancy is a perfect rectangle on random tables") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = 1 + int(rng() % 5);
        int cols = 1 + int(rng() % 5);
        test::TableSpec spec{rows, cols, false, {}, nullptr};
        // Try one random rectangular merge.
        if (rows > 1 && cols > 1 && rng() % 2 == 0) {
            int r = int(rng() % std::uint64_t(rows - 1));
            int c = int(rng() % std::uint64_t(cols - 1));
            int rs = 1 + int(rng() % std::uint64_t(rows - r));
            int cs = 1 + int(rng() % std::uint64_t(cols - c));
            spec.merges.push_back({r, c, rs, cs});
        }
        auto model = model_of(test::DocxBuilder{}.table(spec).build());
        REQUIRE(model.tables.size() == 1);
        const auto& table = model.tables[0];
        // Brute-force occupancy matrix.
        std::vector<std::vector<int>> grid(std::size_t(table.rows),
                                           std::vector<int>(std::size_t(table.cols), 0));
        for (const auto& cell : table.cells)
            for (int r = cell.row_index; r < cell.row_index + cell.row_span; ++r)
                for (int c = cell.col_index; c < cell.col_index + cell.col_span; ++c)
                    ++grid[std::size_t(r)][std::size_t(c)];
        for (const auto& row : grid)
            for (int v : row) CHECK(v == 1);
    }
}

TEST_CASE("reading order: element text matches a plain xml walk") {
    test::DocxBuilder builder;
    builder.paragraph("first paragraph");
    builder.table({2, 2, false, {}, nullptr});
    builder.paragraph("after table");
    builder.toc_block("toc text");
    Bytes bytes = builder.build();
    auto container = Container::open(bytes);
    auto model = build_model(container, "h");

    // Independent walk: every w:t in document order, skipping textbox bodies.
    auto doc = container.parse_part(container.main_part());
    std::string walked;
    std::function<void(const xml::Node&)> walk = [&](const xml::Node& n) {
        for (const auto& c : n.children) {
            if (!c.is_element() || c.name == "w:txbxContent") continue;
            if (c.name == "w:t") walked += c.all_text();
            else walk(c);
        }
    };
    walk(doc);

    std::string joined;
    for (const auto& e : model.elements)
        if (e.in_body) joined += e.text;
    CHECK(joined == walked);
}

TEST_CASE("model json round trip is stable") {
    auto builder = test::DocxBuilder{};
    builder.style({"Heading1", "", 32, true, {}, {}});
    builder.paragraph("heading", {.style = "Heading1"});
    builder.table({2, 2, true, {{0, 0, 2, 1}}, nullptr});
    Bytes bytes = builder.build();
    auto model = model_of(bytes);
    std::string json1 = model_to_json(model);
    auto reparsed = model_from_json(json1);
    CHECK(model_to_json(reparsed) == json1);
    // Determinism: same bytes, byte-identical serialized model.
    CHECK(model_to_json(model_of(bytes)) == json1);
}

TEST_CASE("doc text extraction and the length floor") {
    auto small = model_of(test::simple_docx({"a", "b"}));
    CHECK(extract_doc_text(small) == "a\nb");
    CHECK(utf8_length(extract_doc_text(small)) < kMinDocumentChars);

    std::string exactly199(199, 'x');
    auto m199 = model_of(test::simple_docx({exactly199}));
    CHECK(utf8_length(extract_doc_text(m199)) == 199);
    std::string exactly200(200, 'x');
    auto m200 = model_of(test::simple_docx({exactly200}));
    CHECK(utf8_length(extract_doc_text(m200)) == 200);
}
