#include "fixtures.hpp"

#include <cstring>

#include "dh/core/error.hpp"
#include "dh/core/png.hpp"
#include "dh/core/zip.hpp"
#include "dh/core/zstream.hpp"

namespace dh::test {

namespace {

const char* kDocumentNs =
    "xmlns:w=\"http://schemas.openxmlformats.org/wordprocessingml/2006/main\" "
    "xmlns:r=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships\" "
    "xmlns:wp=\"http://schemas.openxmlformats.org/drawingml/2006/wordprocessingDrawing\" "
    "xmlns:a=\"http://schemas.openxmlformats.org/drawingml/2006/main\" "
    "xmlns:m=\"http://schemas.openxmlformats.org/officeDocument/2006/math\" "
    "xmlns:mc=\"http://schemas.openxmlformats.org/markup-compatibility/2006\"";

std::string rpr_xml(const ParaOpts& opts) {
    std::string rpr;
    if (opts.size_half_points)
        rpr += "<w:sz w:val=\"" + std::to_string(*opts.size_half_points) + "\"/>";
    if (opts.bold && *opts.bold) rpr += "<w:b/>";
    if (opts.italic && *opts.italic) rpr += "<w:i/>";
    if (opts.underline && *opts.underline) rpr += "<w:u w:val=\"single\"/>";
    if (opts.highlight) rpr += "<w:highlight w:val=\"" + *opts.highlight + "\"/>";
    if (rpr.empty()) return "";
    return "<w:rPr>" + rpr + "</w:rPr>";
}

std::string paragraph_xml(const std::string& text, const ParaOpts& opts) {
    std::string p = "<w:p>";
    std::string ppr;
    if (!opts.style.empty()) ppr += "<w:pStyle w:val=\"" + opts.style + "\"/>";
    if (!ppr.empty()) p += "<w:pPr>" + ppr + "</w:pPr>";
    std::string rpr = rpr_xml(opts);
    // Encode embedded newlines as w:br so line-break heuristics see them.
    std::string run_body;
    std::string current;
    auto flush = [&] {
        run_body += "<w:t xml:space=\"preserve\">" + xml_escape_text(current) + "</w:t>";
        current.clear();
    };
    for (char c : text) {
        if (c == '\n') {
            flush();
            run_body += "<w:br/>";
        } else {
            current.push_back(c);
        }
    }
    flush();
    p += "<w:r>" + rpr + run_body + "</w:r></w:p>";
    return p;
}

}  // namespace

std::string xml_escape_text(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

DocxBuilder& DocxBuilder::style(const StyleSpec& spec) {
    styles_.push_back(spec);
    return *this;
}

DocxBuilder& DocxBuilder::paragraph(const std::string& text, const ParaOpts& opts) {
    body_ += paragraph_xml(text, opts);
    return *this;
}

DocxBuilder& DocxBuilder::table(const TableSpec& spec) {
    auto text_of = [&](int r, int c) {
        return spec.cell_text ? spec.cell_text(r, c)
                              : "r" + std::to_string(r) + "c" + std::to_string(c);
    };
    // Grid ownership from the merge list.
    std::vector<std::vector<const MergeSpec*>> owner(
        std::size_t(spec.rows), std::vector<const MergeSpec*>(std::size_t(spec.cols), nullptr));
    for (const auto& m : spec.merges)
        for (int r = m.row; r < m.row + m.row_span; ++r)
            for (int c = m.col; c < m.col + m.col_span; ++c)
                owner[std::size_t(r)][std::size_t(c)] = &m;

    std::string tbl = "<w:tbl><w:tblPr><w:tblStyle w:val=\"TableGrid\"/></w:tblPr><w:tblGrid>";
    for (int c = 0; c < spec.cols; ++c) tbl += "<w:gridCol w:w=\"2000\"/>";
    tbl += "</w:tblGrid>";
    for (int r = 0; r < spec.rows; ++r) {
        tbl += "<w:tr>";
        if (spec.header_row && r == 0) tbl += "<w:trPr><w:tblHeader/></w:trPr>";
        for (int c = 0; c < spec.cols;) {
            const MergeSpec* m = owner[std::size_t(r)][std::size_t(c)];
            if (m && (c != m->col)) {  // covered by a horizontal span to the left
                ++c;
                continue;
            }
            int span = m ? m->col_span : 1;
            std::string tc_pr;
            if (span > 1) tc_pr += "<w:gridSpan w:val=\"" + std::to_string(span) + "\"/>";
            std::string content;
            if (m && r != m->row) {
                tc_pr += "<w:vMerge/>";
                content = "<w:p/>";
            } else {
                if (m && m->row_span > 1) tc_pr += "<w:vMerge w:val=\"restart\"/>";
                content = paragraph_xml(text_of(r, c), {});
            }
            tbl += "<w:tc>";
            if (!tc_pr.empty()) tbl += "<w:tcPr>" + tc_pr + "</w:tcPr>";
            tbl += content + "</w:tc>";
            c += span;
        }
        tbl += "</w:tr>";
    }
    tbl += "</w:tbl>";
    body_ += tbl;
    return *this;
}

DocxBuilder& DocxBuilder::figure_png(int width, int height, Rgb color) {
    Media media;
    media.rel_id = "rId" + std::to_string(next_rel_++);
    media.name = "media/image" + std::to_string(media_.size() + 1) + ".png";
    media.bytes = encode_png(Image(width, height, color));
    const long long emu_w = static_cast<long long>(width) * 9525;
    const long long emu_h = static_cast<long long>(height) * 9525;
    body_ += "<w:p><w:r><w:drawing><wp:inline><wp:extent cx=\"" + std::to_string(emu_w) +
             "\" cy=\"" + std::to_string(emu_h) +
             "\"/><a:graphic><a:graphicData><a:blip r:embed=\"" + media.rel_id +
             "\"/></a:graphicData></a:graphic></wp:inline></w:drawing></w:r></w:p>";
    media_.push_back(std::move(media));
    return *this;
}

DocxBuilder& DocxBuilder::textbox(const std::string& text) {
    body_ += "<w:p><w:r><w:pict><v:shape xmlns:v=\"urn:schemas-microsoft-com:vml\"><v:textbox>"
             "<w:txbxContent>" +
             paragraph_xml(text, {}) + "</w:txbxContent></v:textbox></v:shape></w:pict></w:r></w:p>";
    return *this;
}

DocxBuilder& DocxBuilder::equation() {
    body_ += "<w:p><m:oMathPara><m:oMath><m:r><m:t>x=1</m:t></m:r></m:oMath></m:oMathPara></w:p>";
    return *this;
}

DocxBuilder& DocxBuilder::formtext_paragraph(const std::string& label) {
    body_ += "<w:p><w:r><w:t xml:space=\"preserve\">" + xml_escape_text(label) +
             "</w:t></w:r><w:fldSimple w:instr=\" FORMTEXT \"><w:r><w:t></w:t></w:r>"
             "</w:fldSimple></w:p>";
    return *this;
}

DocxBuilder& DocxBuilder::form_tag_block(const std::string& text) {
    body_ += "<w:sdt><w:sdtPr><w:tag w:val=\"field\"/></w:sdtPr><w:sdtContent>" +
             paragraph_xml(text, {}) + "</w:sdtContent></w:sdt>";
    return *this;
}

DocxBuilder& DocxBuilder::toc_block(const std::string& text) {
    body_ += "<w:sdt><w:sdtPr><w:docPartObj><w:docPartGallery w:val=\"Table of Contents\"/>"
             "</w:docPartObj></w:sdtPr><w:sdtContent>" +
             paragraph_xml(text, {}) + "</w:sdtContent></w:sdt>";
    return *this;
}

DocxBuilder& DocxBuilder::header_text(const std::string& text) {
    headers_.push_back(text);
    return *this;
}

DocxBuilder& DocxBuilder::footer_text(const std::string& text) {
    footers_.push_back(text);
    return *this;
}

DocxBuilder& DocxBuilder::footnote(const std::string& text) {
    footnotes_.push_back(text);
    return *this;
}

DocxBuilder& DocxBuilder::comment(const std::string& text) {
    comments_.push_back(text);
    return *this;
}

DocxBuilder& DocxBuilder::raw_body_xml(const std::string& xml) {
    body_ += xml;
    return *this;
}

DocxBuilder& DocxBuilder::extra_entry(const std::string& name, const std::string& content) {
    extra_entries_.emplace_back(name, to_bytes(content));
    return *this;
}

DocxBuilder& DocxBuilder::extra_entry(const std::string& name, BytesView content) {
    extra_entries_.emplace_back(name, Bytes(content.begin(), content.end()));
    return *this;
}

DocxBuilder& DocxBuilder::external_relationship(const std::string& type,
                                                const std::string& target) {
    external_rels_.emplace_back(type, target);
    return *this;
}

Bytes DocxBuilder::build() const {
    zip::Writer writer;

    std::string content_types =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>"
        "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
        "<Default Extension=\"rels\" ContentType=\"application/vnd.openxmlformats-package."
        "relationships+xml\"/>"
        "<Default Extension=\"xml\" ContentType=\"application/xml\"/>"
        "<Default Extension=\"png\" ContentType=\"image/png\"/>"
        "<Override PartName=\"/word/document.xml\" ContentType=\"application/vnd."
        "openxmlformats-officedocument.wordprocessingml.document.main+xml\"/>"
        "</Types>";
    writer.add("[Content_Types].xml", std::string_view(content_types));

    writer.add("_rels/.rels", std::string_view(
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>"
        "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
        "<Relationship Id=\"rId1\" Type=\"http://schemas.openxmlformats.org/officeDocument/"
        "2006/relationships/officeDocument\" Target=\"word/document.xml\"/>"
        "</Relationships>"));

    // Styles part with document defaults plus requested styles.
    std::string styles =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?><w:styles " +
        std::string(kDocumentNs) +
        "><w:docDefaults><w:rPrDefault><w:rPr><w:sz w:val=\"22\"/></w:rPr></w:rPrDefault>"
        "</w:docDefaults>";
    for (const auto& s : styles_) {
        styles += "<w:style w:type=\"paragraph\" w:styleId=\"" + s.id + "\">";
        styles += "<w:name w:val=\"" + s.id + "\"/>";
        if (!s.based_on.empty()) styles += "<w:basedOn w:val=\"" + s.based_on + "\"/>";
        std::string rpr;
        if (s.size_half_points)
            rpr += "<w:sz w:val=\"" + std::to_string(*s.size_half_points) + "\"/>";
        if (s.bold && *s.bold) rpr += "<w:b/>";
        if (s.italic && *s.italic) rpr += "<w:i/>";
        if (s.underline && *s.underline) rpr += "<w:u w:val=\"single\"/>";
        if (!rpr.empty()) styles += "<w:rPr>" + rpr + "</w:rPr>";
        styles += "</w:style>";
    }
    styles += "</w:styles>";
    writer.add("word/styles.xml", std::string_view(styles));

    // Document rels: styles + media + headers/footers/notes + external ones.
    std::string rels =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>"
        "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
        "<Relationship Id=\"rId1\" Type=\"http://schemas.openxmlformats.org/officeDocument/"
        "2006/relationships/styles\" Target=\"styles.xml\"/>";
    for (const auto& m : media_)
        rels += "<Relationship Id=\"" + m.rel_id +
                "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/"
                "image\" Target=\"" + m.name + "\"/>";
    int rel_counter = 2;
    for (std::size_t i = 0; i < headers_.size(); ++i)
        rels += "<Relationship Id=\"rIdH" + std::to_string(i) +
                "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/"
                "header\" Target=\"header" + std::to_string(i + 1) + ".xml\"/>";
    for (std::size_t i = 0; i < footers_.size(); ++i)
        rels += "<Relationship Id=\"rIdF" + std::to_string(i) +
                "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/"
                "footer\" Target=\"footer" + std::to_string(i + 1) + ".xml\"/>";
    if (!footnotes_.empty())
        rels += "<Relationship Id=\"rIdFn\" Type=\"http://schemas.openxmlformats.org/"
                "officeDocument/2006/relationships/footnotes\" Target=\"footnotes.xml\"/>";
    if (!comments_.empty())
        rels += "<Relationship Id=\"rIdCm\" Type=\"http://schemas.openxmlformats.org/"
                "officeDocument/2006/relationships/comments\" Target=\"comments.xml\"/>";
    for (const auto& [type, target] : external_rels_)
        rels += "<Relationship Id=\"rIdX" + std::to_string(rel_counter++) + "\" Type=\"" + type +
                "\" Target=\"" + target + "\" TargetMode=\"External\"/>";
    rels += "</Relationships>";
    writer.add("word/_rels/document.xml.rels", std::string_view(rels));

    std::string document =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?><w:document " +
        std::string(kDocumentNs) + "><w:body>" + body_ + "<w:sectPr/></w:body></w:document>";
    writer.add("word/document.xml", std::string_view(document));

    for (const auto& m : media_) writer.add("word/" + m.name, BytesView(m.bytes));
    for (std::size_t i = 0; i < headers_.size(); ++i)
        writer.add("word/header" + std::to_string(i + 1) + ".xml",
                   std::string_view("<?xml version=\"1.0\"?><w:hdr " + std::string(kDocumentNs) +
                                    ">" + paragraph_xml(headers_[i], {}) + "</w:hdr>"));
    for (std::size_t i = 0; i < footers_.size(); ++i)
        writer.add("word/footer" + std::to_string(i + 1) + ".xml",
                   std::string_view("<?xml version=\"1.0\"?><w:ftr " + std::string(kDocumentNs) +
                                    ">" + paragraph_xml(footers_[i], {}) + "</w:ftr>"));
    if (!footnotes_.empty()) {
        std::string notes = "<?xml version=\"1.0\"?><w:footnotes " + std::string(kDocumentNs) + ">";
        notes += "<w:footnote w:type=\"separator\" w:id=\"-1\"><w:p/></w:footnote>";
        for (std::size_t i = 0; i < footnotes_.size(); ++i)
            notes += "<w:footnote w:id=\"" + std::to_string(i + 1) + "\">" +
                     paragraph_xml(footnotes_[i], {}) + "</w:footnote>";
        notes += "</w:footnotes>";
        writer.add("word/footnotes.xml", std::string_view(notes));
    }
    if (!comments_.empty()) {
        std::string comments = "<?xml version=\"1.0\"?><w:comments " + std::string(kDocumentNs) + ">";
        for (std::size_t i = 0; i < comments_.size(); ++i)
            comments += "<w:comment w:id=\"" + std::to_string(i) + "\">" +
                        paragraph_xml(comments_[i], {}) + "</w:comment>";
        comments += "</w:comments>";
        writer.add("word/comments.xml", std::string_view(comments));
    }
    for (const auto& [name, content] : extra_entries_) writer.add(name, BytesView(content));
    return writer.finish();
}

Bytes simple_docx(const std::vector<std::string>& paragraphs) {
    DocxBuilder builder;
    for (const auto& p : paragraphs) builder.paragraph(p);
    return builder.build();
}

std::string random_letters(std::size_t count, std::uint64_t seed) {
    std::string out;
    out.reserve(count);
    std::uint64_t state = seed * 6364136223846793005ull + 1442695040888963407ull;
    for (std::size_t i = 0; i < count; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        std::uint64_t v = state >> 33;
        char c = char('a' + v % 27);
        out.push_back(c == char('a' + 26) ? ' ' : c);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string build_warc_record(const WatRecordSpec& record) {
    std::string payload = record.raw_payload;
    if (payload.empty()) {
        payload = R"({"Envelope":{"Payload-Metadata":{"HTTP-Response-Metadata":{"HTML-Metadata":{"Links":[)";
        for (std::size_t i = 0; i < record.links.size(); ++i) {
            if (i) payload += ",";
            std::string escaped;
            for (char c : record.links[i]) {
                if (c == '"' || c == '\\') {
                    escaped.push_back('\\');
                    escaped.push_back(c);
                } else if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    escaped += buf;
                } else {
                    escaped.push_back(c);
                }
            }
            payload += R"({"path":"A@/href","url":")" + escaped + R"("})";
        }
        payload += R"(]}}}}})";
    }
    std::string header = "WARC/1.0\r\n";
    header += "WARC-Type: " + record.warc_type + "\r\n";
    if (!record.target_uri.empty()) header += "WARC-Target-URI: " + record.target_uri + "\r\n";
    header += "Content-Length: " + std::to_string(payload.size()) + "\r\n";
    header += "\r\n";
    return header + payload + "\r\n\r\n";
}

Bytes build_wat(const std::vector<WatRecordSpec>& records) {
    Bytes out;
    for (const auto& record : records) {
        std::string text = build_warc_record(record);
        Bytes member = gzip_compress(view_of(text));
        out.insert(out.end(), member.begin(), member.end());
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void wr16(Bytes& b, std::size_t off, std::uint16_t v) {
    b[off] = std::uint8_t(v);
    b[off + 1] = std::uint8_t(v >> 8);
}

void wr32(Bytes& b, std::size_t off, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b[off + std::size_t(i)] = std::uint8_t(v >> (8 * i));
}

void wr64(Bytes& b, std::size_t off, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b[off + std::size_t(i)] = std::uint8_t(v >> (8 * i));
}

void put_name(Bytes& dir, std::size_t entry_off, const std::string& name) {
    std::size_t i = 0;
    for (; i < name.size() && i < 31; ++i) wr16(dir, entry_off + i * 2, std::uint16_t(name[i]));
    wr16(dir, entry_off + i * 2, 0);
    wr16(dir, entry_off + 64, std::uint16_t((i + 1) * 2));
}

}  // namespace

Bytes build_cfb(const std::vector<CfbItemSpec>& items) {
    constexpr std::size_t kSector = 512;
    // Sector plan: [0]=FAT, [1..d]=directory, then stream data.
    std::size_t entry_count = items.size() + 1;  // + root
    std::size_t dir_sectors = (entry_count * 128 + kSector - 1) / kSector;

    struct StreamPlace {
        std::uint32_t start = 0;
        std::size_t sectors = 0;
    };
    std::vector<StreamPlace> places(items.size());
    std::uint32_t next_sector = std::uint32_t(1 + dir_sectors);
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].is_storage) continue;
        places[i].start = next_sector;
        places[i].sectors = (items[i].stream.size() + kSector - 1) / kSector;
        if (places[i].sectors == 0) places[i].sectors = 1;
        next_sector += std::uint32_t(places[i].sectors);
    }
    std::size_t total_sectors = next_sector;
    if (total_sectors > kSector / 4) throw Error("cfb fixture too large for one FAT sector");

    Bytes file(512 + total_sectors * kSector, 0);
    // Header.
    const std::uint8_t sig[8] = {0xd0, 0xcf, 0x11, 0xe0, 0xa1, 0xb1, 0x1a, 0xe1};
    std::memcpy(file.data(), sig, 8);
    wr16(file, 24, 0x3e);      // minor
    wr16(file, 26, 0x0003);    // major (512-byte sectors)
    wr16(file, 28, 0xfffe);    // little endian
    wr16(file, 30, 9);         // sector shift
    wr16(file, 32, 6);         // mini sector shift
    wr32(file, 44, 1);         // FAT sector count
    wr32(file, 48, 1);         // first directory sector
    wr32(file, 56, 0);         // mini stream cutoff: keep everything in the FAT
    wr32(file, 60, 0xfffffffe);  // first minifat: end of chain
    wr32(file, 64, 0);
    wr32(file, 68, 0xfffffffe);  // first difat
    wr32(file, 72, 0);
    for (int i = 0; i < 109; ++i) wr32(file, 76 + std::size_t(i) * 4, 0xffffffff);
    wr32(file, 76, 0);  // FAT lives in sector 0

    // FAT sector.
    std::size_t fat_off = 512;
    for (std::size_t s = 0; s < kSector / 4; ++s)
        wr32(file, fat_off + s * 4, 0xffffffff);  // free
    wr32(file, fat_off + 0, 0xfffffffd);          // FAT sector marker
    for (std::size_t d = 0; d < dir_sectors; ++d)
        wr32(file, fat_off + (1 + d) * 4,
             d + 1 == dir_sectors ? 0xfffffffe : std::uint32_t(2 + d));
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].is_storage) continue;
        for (std::size_t s = 0; s < places[i].sectors; ++s) {
            std::uint32_t sector = places[i].start + std::uint32_t(s);
            std::uint32_t next =
                s + 1 == places[i].sectors ? 0xfffffffe : sector + 1;
            wr32(file, fat_off + sector * 4, next);
        }
    }

    // Directory.
    std::size_t dir_off = 512 + kSector;
    auto entry_at = [&](std::size_t index) { return dir_off + index * 128; };
    for (std::size_t e = 0; e < entry_count; ++e) {
        std::size_t off = entry_at(e);
        wr32(file, off + 68, 0xffffffff);  // left
        wr32(file, off + 72, 0xffffffff);  // right
        wr32(file, off + 76, 0xffffffff);  // child
    }
    put_name(file, entry_at(0), "Root Entry");
    file[entry_at(0) + 66] = 5;  // root
    wr32(file, entry_at(0) + 116, 0xfffffffe);
    wr64(file, entry_at(0) + 120, 0);
    for (std::size_t i = 0; i < items.size(); ++i) {
        std::size_t off = entry_at(i + 1);
        put_name(file, off, items[i].name);
        file[off + 66] = items[i].is_storage ? 1 : 2;
        if (items[i].is_storage) {
            wr32(file, off + 116, 0xfffffffe);
            wr64(file, off + 120, 0);
        } else {
            wr32(file, off + 116, places[i].start);
            wr64(file, off + 120, items[i].stream.size());
            std::size_t data_off = 512 + std::size_t(places[i].start) * kSector;
            std::memcpy(file.data() + data_off, items[i].stream.data(), items[i].stream.size());
        }
    }
    return file;
}

Bytes build_legacy_doc(bool encrypted_bit, bool with_object_pool, bool with_macros) {
    Bytes word_doc(1024, 0);
    word_doc[0] = 0xec;  // FIB magic low byte (wIdent = 0xA5EC)
    word_doc[1] = 0xa5;
    std::uint16_t flags = encrypted_bit ? 0x0100 : 0x0000;
    word_doc[10] = std::uint8_t(flags);
    word_doc[11] = std::uint8_t(flags >> 8);
    std::vector<CfbItemSpec> items;
    items.push_back({"WordDocument", false, word_doc});
    if (with_object_pool) items.push_back({"ObjectPool", true, {}});
    if (with_macros) items.push_back({"Macros", true, {}});
    return build_cfb(items);
}

}  // namespace dh::test
