#include <doctest.h>

#include <random>
#include <set>

#include "dh/annotate/annotator.hpp"
#include "dh/annotate/coco.hpp"
#include "dh/annotate/mock_renderer.hpp"
#include "dh/core/png.hpp"
#include "dh/core/zstream.hpp"
#include "fixtures.hpp"
#include "table_oracle.hpp"

#include <nlohmann/json.hpp>

using namespace dh;
using namespace dh::annotate;

TEST_CASE("color map is injective with separated tolerance windows") {
    ColorMap colors;
    CHECK(colors.valid());
    // Exact-window reverse lookup: every palette entry maps back, and a +-8
    // perturbed pixel still resolves to the same category.
    for (int i = 0; i < docx::kCategoryCount; ++i) {
        auto category = docx::Category(i);
        Rgb c = colors.color_of(category);
        CHECK(colors.category_of(c, 8) == category);
        Rgb wobble{std::uint8_t(std::min(255, c.r + 8)), std::uint8_t(std::max(0, c.g - 8)),
                   c.b};
        CHECK(colors.category_of(wobble, 8) == category);
    }
    CHECK(!colors.category_of(Rgb{255, 255, 255}, 8).has_value());
}

TEST_CASE("detect recovers drawn rectangles exactly") {
    ColorMap colors;
    Image page(400, 300);
    page.fill_rect(Rect{50, 60, 100, 40}, colors.color_of(docx::Category::Table));
    auto boxes = detect_bboxes(page, colors, {});
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].category == docx::Category::Table);
    CHECK(boxes[0].box == Rect{50, 60, 100, 40});

    CHECK(detect_bboxes(Image(200, 100), colors, {}).empty());  // blank page
}

TEST_CASE("detect merge rule: close same-category boxes join") {
    ColorMap colors;
    DetectParams params;
    Image page(300, 300);
    Rgb h1 = colors.color_of(docx::Category::Heading1);
    page.fill_rect(Rect{20, 20, 120, 30}, h1);
    page.fill_rect(Rect{40, 52, 120, 30}, h1);  // 2 px below, horizontally overlapping
    auto boxes = detect_bboxes(page, colors, params);
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].box == Rect{20, 20, 140, 62});

    // 6 px apart: stays separate.
    Image page2(300, 300);
    page2.fill_rect(Rect{20, 20, 120, 30}, h1);
    page2.fill_rect(Rect{40, 56, 120, 30}, h1);
    CHECK(detect_bboxes(page2, colors, params).size() == 2);
}

TEST_CASE("detect drops components below the minimum area") {
    ColorMap colors;
    Image page(100, 100);
    page.fill_rect(Rect{10, 10, 3, 5}, colors.color_of(docx::Category::Quote));  // 15 px
    CHECK(detect_bboxes(page, colors, {}).empty());
    page.fill_rect(Rect{40, 40, 4, 4}, colors.color_of(docx::Category::Quote));  // 16 px
    auto boxes = detect_bboxes(page, colors, {});
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].box == Rect{40, 40, 4, 4});
}

TEST_CASE("parallel detection equals the serial reference on random pages") {
    ColorMap colors;
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        Image page(320, 240);
        for (int k = 0; k < 25; ++k) {
            auto category = docx::Category(rng() % docx::kCategoryCount);
            int x = int(rng() % 280), y = int(rng() % 200);
            page.fill_rect(Rect{x, y, 6 + int(rng() % 40), 4 + int(rng() % 24)},
                           colors.color_of(category));
        }
        auto fast = detect_bboxes(page, colors, {});
        auto reference = detect_bboxes_reference(page, colors, {});
        CHECK(fast == reference);
    }
}

TEST_CASE("table grid: uniform 2x2") {
    std::vector<Rect> cells = {{0, 0, 50, 30}, {60, 0, 50, 30}, {0, 40, 50, 30}, {60, 40, 50, 30}};
    auto grid = derive_table_grid(Rect{0, 0, 110, 70}, cells);
    REQUIRE(grid.row_boxes.size() == 2);
    REQUIRE(grid.col_boxes.size() == 2);
    for (const auto& row : grid.row_members) CHECK(row.size() == 2);
    for (const auto& col : grid.col_members) CHECK(col.size() == 2);
}

TEST_CASE("table grid: merged cell appears in both rows") {
    // A spans both rows of column 0; B and C fill column 1.
    std::vector<Rect> cells = {
        {0, 0, 50, 70},   // A (tall)
        {60, 0, 50, 30},  // B
        {60, 40, 50, 30}, // C
    };
    auto grid = derive_table_grid(Rect{0, 0, 110, 70}, cells);
    REQUIRE(grid.row_members.size() == 2);
    // Cells are re-sorted top-to-bottom/left-to-right; find A by height.
    int a_index = -1;
    for (int i = 0; i < int(grid.cell_boxes.size()); ++i)
        if (grid.cell_boxes[std::size_t(i)].h == 70) a_index = i;
    REQUIRE(a_index >= 0);
    for (const auto& row : grid.row_members) {
        CHECK(row.size() == 2);
        CHECK(std::find(row.begin(), row.end(), a_index) != row.end());
    }
    // Grid conservation: row memberships equal per-cell row spans.
    std::vector<int> row_span_of(grid.cell_boxes.size(), 0);
    for (const auto& row : grid.row_members)
        for (int i : row) ++row_span_of[std::size_t(i)];
    CHECK(row_span_of[std::size_t(a_index)] == 2);
}

TEST_CASE("table grid: single cell degenerates to one row and one column") {
    auto grid = derive_table_grid(Rect{0, 0, 60, 40}, {{5, 5, 50, 30}});
    CHECK(grid.row_boxes.size() == 1);
    CHECK(grid.col_boxes.size() == 1);
    CHECK(grid.row_members[0] == std::vector<int>{0});
}

TEST_CASE("table grid equals the band-coverage oracle on random merged tables") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        auto cells = test::random_merged_table(rng);
        auto grid = derive_table_grid(Rect{0, 0, 400, 300}, cells);
        auto oracle = test::oracle_grid(cells);
        CHECK(grid.row_members == oracle.rows);
        CHECK(grid.col_members == oracle.cols);
    }
}

TEST_CASE("colorize preserves structure and applies shading") {
    test::DocxBuilder builder;
    builder.style({"Heading1", "", 32, true, {}, {}});
    builder.paragraph("heading text", {.style = "Heading1", .highlight = "yellow"});
    builder.paragraph(std::string(210, 'b'));
    builder.table({2, 2, true, {}, nullptr});
    builder.figure_png(64, 48);
    Bytes original = builder.build();

    auto container = docx::Container::open(original);
    auto model = docx::build_model(container, "h");
    ColorMap colors;
    auto result = colorize(container, model, colors);
    CHECK(result.failed == 0);
    CHECK(result.edited >= model.elements.size() - 1);

    // Re-parses to the same element structure with unchanged categories.
    auto recontainer = docx::Container::open(result.container_bytes);
    auto remodel = docx::build_model(recontainer, "h");
    REQUIRE(remodel.elements.size() == model.elements.size());
    for (std::size_t i = 0; i < model.elements.size(); ++i) {
        CHECK(remodel.elements[i].category == model.elements[i].category);
        CHECK(remodel.elements[i].text == model.elements[i].text);
    }

    // Highlight removed, shading applied with the category color.
    auto doc = recontainer.parse_part(recontainer.main_part());
    bool saw_highlight = false;
    std::size_t shd_count = 0;
    doc.walk([&](const xml::Node& n) {
        if (n.name == "w:highlight") saw_highlight = true;
        if (n.name == "w:shd") ++shd_count;
    });
    CHECK(!saw_highlight);
    CHECK(shd_count > 0);

    // The embedded image became a solid block of the Figure color.
    for (const auto& e : remodel.elements) {
        if (e.source != docx::SourceKind::Figure) continue;
        for (const auto& rel : recontainer.relationships_of(e.part)) {
            if (rel.id != e.image_rel_id) continue;
            Image img = decode_png(recontainer.read_part(rel.target));
            CHECK(img.width() == 64);
            CHECK(img.height() == 48);
            CHECK(img.at(5, 5) == colors.color_of(docx::Category::Figure));
        }
    }
}

TEST_CASE("mock render round trip recovers every colored element") {
    test::DocxBuilder builder;
    builder.style({"Heading1", "", 32, true, {}, {}});
    builder.paragraph("Heading here", {.style = "Heading1"});
    builder.paragraph(std::string(300, 'a'));
    builder.table({3, 3, true, {{0, 1, 2, 1}}, nullptr});
    builder.figure_png(100, 60);
    Bytes original = builder.build();

    auto container = docx::Container::open(original);
    auto model = docx::build_model(container, "h");
    ColorMap colors;
    auto colorized = colorize(container, model, colors);

    MockRenderer renderer;
    RenderOptions options;
    auto layout = renderer.layout(colorized.container_bytes, options);
    auto rendered = renderer.render(colorized.container_bytes, options);
    REQUIRE(rendered.status == RenderStatus::Ok);
    REQUIRE(rendered.pages.size() == std::size_t(layout.page_count));

    auto detected = detect_bboxes(rendered.pages[0], colors, {});
    // Every colored ground-truth item on page 0 is recovered at IoU >= 0.95
    // with the right category.
    for (const auto& item : layout.items) {
        if (item.page != 0 || !item.fill) continue;
        auto truth_cat = colors.category_of(*item.fill, 0);
        REQUIRE(truth_cat.has_value());
        bool matched = false;
        for (const auto& box : detected)
            if (box.category == *truth_cat && rect_iou(box.box, item.rect) >= 0.95)
                matched = true;
        CHECK_MESSAGE(matched, "missing ", docx::category_name(*truth_cat), " at ",
                      item.rect.x, ",", item.rect.y);
    }
}

TEST_CASE("a three-page fixture renders three images and one pdf") {
    test::DocxBuilder builder;
    for (int i = 0; i < 3; ++i) builder.paragraph(test::random_letters(5000, 70 + unsigned(i)));
    Bytes doc = builder.build();
    auto container = docx::Container::open(doc);
    auto model = docx::build_model(container, "h");
    ColorMap colors;
    auto colorized = colorize(container, model, colors);
    MockRenderer renderer;
    RenderOptions tiny;
    tiny.dpi = 36;
    auto rendered = renderer.render(colorized.container_bytes, tiny);
    REQUIRE(rendered.status == RenderStatus::Ok);
    CHECK(rendered.pages.size() == 3);
    CHECK(!rendered.pdf.empty());
    CHECK(pdf_page_count(rendered.pdf) == 3);

    // Spatial-composition proxy: colorizing must not change the page count.
    auto plain = renderer.render(doc, tiny);
    REQUIRE(plain.status == RenderStatus::Ok);
    CHECK(plain.page_count == rendered.page_count);
}

TEST_CASE("render rejects page counts over the limit before rasterizing") {
    test::DocxBuilder builder;
    for (int i = 0; i < 120; ++i) builder.paragraph(test::random_letters(400, 17 + unsigned(i)));
    Bytes doc = builder.build();
    auto container = docx::Container::open(doc);
    auto model = docx::build_model(container, "h");
    ColorMap colors;
    auto colorized = colorize(container, model, colors);

    MockRenderer renderer;
    RenderOptions tiny;
    tiny.dpi = 36;
    tiny.max_pages = 3;
    auto result = renderer.render(colorized.container_bytes, tiny);
    CHECK(result.status == RenderStatus::TooManyPages);
    CHECK(result.pages.empty());
    CHECK(result.page_count > 3);
}

TEST_CASE("pdf text: mock words come back with exact boxes") {
    test::DocxBuilder builder;
    builder.paragraph("alpha beta");
    builder.paragraph(std::string(210, 'z'));
    Bytes doc = builder.build();
    auto container = docx::Container::open(doc);
    auto model = docx::build_model(container, "h");
    ColorMap colors;
    auto colorized = colorize(container, model, colors);
    MockRenderer renderer;
    RenderOptions options;
    auto layout = renderer.layout(colorized.container_bytes, options);
    auto rendered = renderer.render(colorized.container_bytes, options);
    REQUIRE(rendered.status == RenderStatus::Ok);

    auto extracted = extract_page_text(rendered.pdf, 0, options.dpi);
    CHECK(!extracted.unsupported_feature);
    std::map<std::string, Rect> expected;
    for (const auto& item : layout.items)
        if (item.page == 0)
            for (const auto& w : item.words) expected[w.text] = w.box;
    REQUIRE(expected.count("alpha") == 1);
    std::map<std::string, Rect> got;
    for (const auto& w : extracted.words) got[w.text] = w.box;
    CHECK(got.count("alpha") == 1);
    CHECK(got.count("beta") == 1);
    CHECK(got["alpha"] == expected["alpha"]);
    CHECK(got["beta"] == expected["beta"]);
    CHECK(extracted.page_text.find("alpha beta") != std::string::npos);
}

TEST_CASE("pdf text: glyph grouping splits on wide gaps") {
    // Hand-built single-page PDF with glyphs c,a,t adjacent then x far right.
    std::string content =
        "BT /F1 10 Tf 1 0 0 1 100 700 Tm (c) Tj ET\n"
        "BT /F1 10 Tf 1 0 0 1 106 700 Tm (a) Tj ET\n"
        "BT /F1 10 Tf 1 0 0 1 112 700 Tm (t) Tj ET\n"
        "BT /F1 10 Tf 1 0 0 1 150 700 Tm (x) Tj ET\n";
    Bytes deflated = deflate_zlib(view_of(content));
    std::string pdf = "%PDF-1.4\n";
    pdf += "1 0 obj\n<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /FirstChar 32 "
           "/LastChar 126 /Widths [";
    for (int i = 32; i <= 126; ++i) pdf += "600 ";
    pdf += "] >>\nendobj\n";
    pdf += "2 0 obj\n<< /Type /Pages /Kids [3 0 R] /Count 1 >>\nendobj\n";
    pdf += "3 0 obj\n<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Resources << /Font "
           "<< /F1 1 0 R >> >> /Contents 4 0 R >>\nendobj\n";
    pdf += "4 0 obj\n<< /Length " + std::to_string(deflated.size()) +
           " /Filter /FlateDecode >>\nstream\n";
    pdf += std::string(deflated.begin(), deflated.end());
    pdf += "\nendstream\nendobj\n";
    pdf += "5 0 obj\n<< /Type /Catalog /Pages 2 0 R >>\nendobj\n";
    pdf += "trailer\n<< /Size 6 /Root 5 0 R >>\n%%EOF\n";

    auto result = extract_page_text(view_of(pdf), 0, 72);
    REQUIRE(result.words.size() == 2);
    CHECK(result.words[0].text == "cat");
    CHECK(result.words[1].text == "x");
    // At 72 dpi, pt == px: cat spans x=100..118 (3 glyphs of 6pt).
    CHECK(result.words[0].box.x == 100);
    CHECK(result.words[0].box.w == 18);
    CHECK(result.page_text == "cat x");
}

TEST_CASE("image-only pages are kept with empty text") {
    test::DocxBuilder builder;
    builder.paragraph(std::string(210, 'a'));
    Bytes doc = builder.build();
    auto container = docx::Container::open(doc);
    auto model = docx::build_model(container, "h");
    ColorMap colors;
    auto colorized = colorize(container, model, colors);
    MockRenderer renderer;
    auto rendered = renderer.render(colorized.container_bytes, {});
    // Page exists even when the PDF has no words for it.
    auto beyond = extract_page_text(rendered.pdf, 5, 150);
    CHECK(beyond.page_text.empty());
}

TEST_CASE("annotate_document end to end on one fixture") {
    test::DocxBuilder builder;
    builder.style({"Heading1", "", 32, true, {}, {}});
    builder.paragraph("Heading here", {.style = "Heading1"});
    builder.paragraph(std::string(250, 'a'));
    builder.table({2, 2, false, {}, nullptr});
    Bytes doc = builder.build();

    MockRenderer renderer;
    AnnotateParams params;
    auto result = annotate_document(doc, renderer, params);
    REQUIRE(result.status == DocStatus::Annotated);
    REQUIRE(!result.pages.empty());
    const auto& page = result.pages[0];
    CHECK(page.width > 0);
    bool has_row = false, has_col = false, has_table = false;
    for (const auto& b : page.boxes) {
        has_row = has_row || b.category == docx::Category::TableRow;
        has_col = has_col || b.category == docx::Category::TableColumn;
        has_table = has_table || b.category == docx::Category::Table;
    }
    CHECK(has_table);
    CHECK(has_row);
    CHECK(has_col);
    CHECK(!page.page_text.empty());

    // Rejection paths produce zero pages.
    auto short_doc = annotate_document(test::simple_docx({"tiny"}), renderer, params);
    CHECK(short_doc.status == DocStatus::Rejected);
    CHECK(short_doc.reason == "TextTooShort");
    CHECK(short_doc.pages.empty());

    // JSON round trip.
    std::string json = pages_to_json(result.pages);
    auto back = pages_from_json(json);
    CHECK(pages_to_json(back) == json);
}

TEST_CASE("annotation survives a table taller than one page") {
    test::DocxBuilder builder;
    builder.paragraph(test::random_letters(250, 5));
    builder.table({40, 3, true, {}, nullptr});
    MockRenderer renderer;
    AnnotateParams params;
    params.render.dpi = 96;
    auto result = annotate_document(builder.build(), renderer, params);
    REQUIRE(result.status == DocStatus::Annotated);
    CHECK(!result.pages.empty());
    // Full part coverage through the annotate path as well.
    test::DocxBuilder full;
    full.paragraph(test::random_letters(250, 6));
    full.header_text("running header");
    full.footer_text("running footer");
    full.footnote("note text");
    full.comment("reviewer remark");
    auto annotated = annotate_document(full.build(), renderer, params);
    REQUIRE(annotated.status == DocStatus::Annotated);
    std::set<docx::Category> seen;
    for (const auto& page : annotated.pages)
        for (const auto& b : page.boxes) seen.insert(b.category);
    CHECK(seen.count(docx::Category::Header) == 1);
    CHECK(seen.count(docx::Category::Footer) == 1);
}

TEST_CASE("a crashing renderer is contained") {
    struct CrashingRenderer : Renderer {
        RenderResult render(const Bytes&, const RenderOptions&) override {
            RenderResult r;
            r.status = RenderStatus::Crashed;
            r.detail = "boom";
            return r;
        }
    } renderer;
    auto result = annotate_document(test::simple_docx({std::string(300, 'a')}), renderer, {});
    CHECK(result.status == DocStatus::Failed);
    CHECK(result.reason == "RenderCrash");
}

TEST_CASE("word-processor noise elements survive the full path") {
    // Mimics real exporter output: rsid attributes, proofErr markers,
    // bookmarks, smart-quote entities, multi-run paragraphs, hyperlinks.
    test::DocxBuilder builder;
    builder.style({"Heading1", "", 32, true, {}, {}});
    builder.raw_body_xml(
        "<w:p w:rsidR=\"00AB12CD\" w:rsidRDefault=\"00AB12CD\">"
        "<w:pPr><w:pStyle w:val=\"Heading1\"/></w:pPr>"
        "<w:bookmarkStart w:id=\"0\" w:name=\"_Toc1\"/>"
        "<w:r><w:t>Quarterly </w:t></w:r>"
        "<w:proofErr w:type=\"spellStart\"/>"
        "<w:r w:rsidRPr=\"00AB12CD\"><w:rPr><w:b/></w:rPr><w:t>summary</w:t></w:r>"
        "<w:proofErr w:type=\"spellEnd\"/>"
        "<w:bookmarkEnd w:id=\"0\"/>"
        "</w:p>");
    builder.raw_body_xml(
        "<w:p><w:r><w:t xml:space=\"preserve\">They said &#8220;fine&#8221; \xe2\x80\x94 "
        "see </w:t></w:r>"
        "<w:hyperlink r:id=\"rIdX9\"><w:r><w:rPr><w:u w:val=\"single\"/></w:rPr>"
        "<w:t>the appendix</w:t></w:r></w:hyperlink>"
        "<w:r><w:t xml:space=\"preserve\"> for details.</w:t></w:r></w:p>");
    builder.paragraph(test::random_letters(220, 91));
    Bytes doc = builder.build();

    auto container = docx::Container::open(doc);
    auto model = docx::build_model(container, "noise");
    const docx::DocElement* heading = nullptr;
    for (const auto& e : model.elements)
        if (e.text == "Quarterly summary") heading = &e;
    REQUIRE(heading);
    CHECK(heading->category == docx::Category::Heading1);
    bool smart_quotes = false;
    for (const auto& e : model.elements)
        smart_quotes = smart_quotes ||
                       e.text.find("“fine”") != std::string::npos;
    CHECK(smart_quotes);

    MockRenderer renderer;
    AnnotateParams params;
    params.render.dpi = 96;
    auto annotated = annotate_document(doc, renderer, params);
    REQUIRE(annotated.status == DocStatus::Annotated);
    CHECK(annotated.colorize_failures == 0);
    bool heading_box = false;
    for (const auto& b : annotated.pages[0].boxes)
        heading_box = heading_box || b.category == docx::Category::Heading1;
    CHECK(heading_box);
    // Hyperlink text shows up in the page words.
    std::string all_words;
    for (const auto& w : annotated.pages[0].words) all_words += w.text + " ";
    CHECK(all_words.find("appendix") != std::string::npos);
}

TEST_CASE("coco json carries the 30 categories and box geometry") {
    CocoImage img;
    img.id = 1;
    img.file_name = "images/x_0.png";
    img.width = 100;
    img.height = 80;
    img.boxes.push_back({docx::Category::Table, Rect{1, 2, 30, 20}, std::nullopt});
    auto parsed = nlohmann::json::parse(coco_json({img}));
    REQUIRE(parsed["categories"].size() == 30);
    CHECK(parsed["categories"][0]["name"] == "Title");
    CHECK(parsed["categories"][0]["id"] == 1);
    REQUIRE(parsed["annotations"].size() == 1);
    CHECK(parsed["annotations"][0]["bbox"] == nlohmann::json({1, 2, 30, 20}));
    CHECK(parsed["annotations"][0]["category_id"] ==
          int(docx::Category::Table) + 1);
    CHECK(parsed["annotations"][0]["iscrowd"] == 0);
}
