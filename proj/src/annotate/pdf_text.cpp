#include "dh/annotate/pdf_text.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <map>

#include "dh/core/error.hpp"
#include "dh/core/zstream.hpp"

namespace dh::annotate {

namespace {

struct ObjRef {
    int id = 0;
};

// A very small object model: dictionaries kept as raw text plus extracted
// keys we care about, streams as byte ranges.
struct PdfObject {
    std::string dict;
    Bytes stream;
    bool has_stream = false;
};

class PdfDoc {
public:
    explicit PdfDoc(BytesView data) : text_(reinterpret_cast<const char*>(data.data()), data.size()) {
        scan_objects();
    }

    const PdfObject* object(int id) const {
        auto it = objects_.find(id);
        return it == objects_.end() ? nullptr : &it->second;
    }

    // Page object ids in document order.
    std::vector<int> pages() const {
        std::vector<int> out;
        int catalog = -1;
        for (const auto& [id, obj] : objects_) {
            if (obj.dict.find("/Type /Catalog") != std::string::npos ||
                obj.dict.find("/Type/Catalog") != std::string::npos) {
                catalog = id;
                break;
            }
        }
        if (catalog < 0) return out;
        auto root_ref = find_ref(objects_.at(catalog).dict, "/Pages");
        if (!root_ref) return out;
        collect_pages(root_ref->id, out, 0);
        return out;
    }

    static std::optional<ObjRef> find_ref(const std::string& dict, const std::string& key) {
        auto at = dict.find(key);
        if (at == std::string::npos) return std::nullopt;
        at += key.size();
        int id = 0;
        bool any = false;
        while (at < dict.size() && std::isspace(static_cast<unsigned char>(dict[at]))) ++at;
        while (at < dict.size() && std::isdigit(static_cast<unsigned char>(dict[at]))) {
            id = id * 10 + (dict[at] - '0');
            ++at;
            any = true;
        }
        if (!any) return std::nullopt;
        return ObjRef{id};
    }

    static std::vector<int> find_ref_array(const std::string& dict, const std::string& key) {
        std::vector<int> out;
        auto at = dict.find(key);
        if (at == std::string::npos) return out;
        auto open = dict.find('[', at);
        auto close = dict.find(']', at);
        if (open == std::string::npos || close == std::string::npos || close < open) {
            if (auto single = find_ref(dict, key)) out.push_back(single->id);
            return out;
        }
        std::size_t i = open + 1;
        while (i < close) {
            while (i < close && !std::isdigit(static_cast<unsigned char>(dict[i]))) ++i;
            int id = 0;
            bool any = false;
            while (i < close && std::isdigit(static_cast<unsigned char>(dict[i]))) {
                id = id * 10 + (dict[i] - '0');
                ++i;
                any = true;
            }
            // skip generation + R
            while (i < close && dict[i] != 'R' && dict[i] != ']') ++i;
            if (i < close) ++i;
            if (any) out.push_back(id);
        }
        return out;
    }

private:
    void collect_pages(int node_id, std::vector<int>& out, int depth) const {
        if (depth > 32) return;
        const PdfObject* node = object(node_id);
        if (!node) return;
        if (node->dict.find("/Type /Page") != std::string::npos &&
            node->dict.find("/Type /Pages") == std::string::npos) {
            out.push_back(node_id);
            return;
        }
        if (node->dict.find("/Type/Page") != std::string::npos &&
            node->dict.find("/Type/Pages") == std::string::npos) {
            out.push_back(node_id);
            return;
        }
        for (int kid : find_ref_array(node->dict, "/Kids")) collect_pages(kid, out, depth + 1);
    }

    void scan_objects() {
        std::size_t pos = 0;
        while (pos < text_.size()) {
            auto obj_at = text_.find(" obj", pos);
            if (obj_at == std::string::npos) break;
            // Walk back over "N G".
            std::size_t line_start = text_.rfind('\n', obj_at);
            if (line_start == std::string::npos) line_start = 0;
            else ++line_start;
            int id = 0;
            {
                std::size_t i = line_start;
                bool any = false;
                while (i < obj_at && std::isdigit(static_cast<unsigned char>(text_[i]))) {
                    id = id * 10 + (text_[i] - '0');
                    ++i;
                    any = true;
                }
                if (!any) {
                    pos = obj_at + 4;
                    continue;
                }
            }
            std::size_t body_start = obj_at + 4;
            auto stream_at = text_.find("stream", body_start);
            auto endobj_at = text_.find("endobj", body_start);
            if (endobj_at == std::string::npos) break;
            PdfObject obj;
            if (stream_at != std::string::npos && stream_at < endobj_at) {
                obj.dict = std::string(text_.substr(body_start, stream_at - body_start));
                std::size_t data_start = stream_at + 6;
                if (data_start < text_.size() && text_[data_start] == '\r') ++data_start;
                if (data_start < text_.size() && text_[data_start] == '\n') ++data_start;
                long long length = parse_int_after(obj.dict, "/Length");
                if (length < 0) throw PdfError("stream without direct /Length");
                if (data_start + std::size_t(length) > text_.size())
                    throw PdfError("stream length out of range");
                obj.stream.assign(text_.begin() + std::ptrdiff_t(data_start),
                                  text_.begin() + std::ptrdiff_t(data_start + std::size_t(length)));
                obj.has_stream = true;
                endobj_at = text_.find("endobj", data_start + std::size_t(length));
                if (endobj_at == std::string::npos) break;
            } else {
                obj.dict = std::string(text_.substr(body_start, endobj_at - body_start));
            }
            objects_[id] = std::move(obj);
            pos = endobj_at + 6;
        }
        if (objects_.empty()) throw PdfError("no objects found");
    }

    static long long parse_int_after(const std::string& dict, const std::string& key) {
        auto at = dict.find(key);
        if (at == std::string::npos) return -1;
        at += key.size();
        while (at < dict.size() && std::isspace(static_cast<unsigned char>(dict[at]))) ++at;
        if (at >= dict.size() || !std::isdigit(static_cast<unsigned char>(dict[at]))) return -1;
        long long v = 0;
        while (at < dict.size() && std::isdigit(static_cast<unsigned char>(dict[at])))
            v = v * 10 + (dict[at++] - '0');
        return v;
    }

    std::string_view text_;
    std::map<int, PdfObject> objects_;
};

struct FontInfo {
    int first_char = 32;
    std::vector<int> widths;  // 1000-em units
    int width_of(unsigned char c) const {
        int idx = int(c) - first_char;
        if (idx >= 0 && idx < int(widths.size())) return widths[std::size_t(idx)];
        return 500;
    }
};

FontInfo parse_font(const std::string& dict) {
    FontInfo f;
    auto fc = dict.find("/FirstChar");
    if (fc != std::string::npos) {
        fc += 10;
        while (fc < dict.size() && std::isspace(static_cast<unsigned char>(dict[fc]))) ++fc;
        int v = 0;
        while (fc < dict.size() && std::isdigit(static_cast<unsigned char>(dict[fc])))
            v = v * 10 + (dict[fc++] - '0');
        f.first_char = v;
    }
    auto w = dict.find("/Widths");
    if (w != std::string::npos) {
        auto open = dict.find('[', w);
        auto close = dict.find(']', w);
        if (open != std::string::npos && close != std::string::npos) {
            std::size_t i = open + 1;
            while (i < close) {
                while (i < close && !std::isdigit(static_cast<unsigned char>(dict[i]))) ++i;
                int v = 0;
                bool any = false;
                while (i < close && std::isdigit(static_cast<unsigned char>(dict[i]))) {
                    v = v * 10 + (dict[i++] - '0');
                    any = true;
                }
                if (any) f.widths.push_back(v);
            }
        }
    }
    return f;
}

double parse_media_box_height(const std::string& dict) {
    auto at = dict.find("/MediaBox");
    if (at == std::string::npos) return 792.0;
    auto open = dict.find('[', at);
    auto close = dict.find(']', at);
    if (open == std::string::npos || close == std::string::npos) return 792.0;
    std::string nums = dict.substr(open + 1, close - open - 1);
    double v[4] = {0, 0, 612, 792};
    int n = 0;
    std::size_t i = 0;
    while (i < nums.size() && n < 4) {
        while (i < nums.size() && !(std::isdigit(static_cast<unsigned char>(nums[i])) ||
                                    nums[i] == '-' || nums[i] == '.'))
            ++i;
        if (i >= nums.size()) break;
        std::size_t end = i;
        while (end < nums.size() && (std::isdigit(static_cast<unsigned char>(nums[end])) ||
                                     nums[end] == '-' || nums[end] == '.' || nums[end] == '+'))
            ++end;
        try {
            v[n++] = std::stod(nums.substr(i, end - i));
        } catch (...) {
            break;
        }
        i = end;
    }
    return v[3] - v[1];
}

// --- content stream tokenizer -------------------------------------------------

struct Token {
    enum class Kind { Number, String, Name, ArrayOpen, ArrayClose, Operator } kind;
    double number = 0;
    std::string text;
};

class ContentLexer {
public:
    explicit ContentLexer(const Bytes& data)
        : s_(reinterpret_cast<const char*>(data.data()), data.size()) {}

    std::optional<Token> next() {
        skip_ws();
        if (pos_ >= s_.size()) return std::nullopt;
        char c = s_[pos_];
        if (c == '(') return lex_string();
        if (c == '<') return lex_hex_string();
        if (c == '[') {
            ++pos_;
            return Token{Token::Kind::ArrayOpen, 0, ""};
        }
        if (c == ']') {
            ++pos_;
            return Token{Token::Kind::ArrayClose, 0, ""};
        }
        if (c == '/') return lex_name();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')
            return lex_number();
        return lex_operator();
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() &&
               (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '\0'))
            ++pos_;
    }

    Token lex_string() {
        ++pos_;  // (
        std::string out;
        int depth = 1;
        while (pos_ < s_.size() && depth > 0) {
            char c = s_[pos_++];
            if (c == '\\' && pos_ < s_.size()) {
                char esc = s_[pos_++];
                switch (esc) {
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case '(': out.push_back('('); break;
                    case ')': out.push_back(')'); break;
                    case '\\': out.push_back('\\'); break;
                    default:
                        if (esc >= '0' && esc <= '7') {
                            int v = esc - '0';
                            for (int k = 0; k < 2 && pos_ < s_.size() && s_[pos_] >= '0' &&
                                            s_[pos_] <= '7';
                                 ++k)
                                v = v * 8 + (s_[pos_++] - '0');
                            out.push_back(char(v));
                        } else {
                            out.push_back(esc);
                        }
                }
                continue;
            }
            if (c == '(') {
                ++depth;
                out.push_back(c);
            } else if (c == ')') {
                --depth;
                if (depth > 0) out.push_back(c);
            } else {
                out.push_back(c);
            }
        }
        return Token{Token::Kind::String, 0, std::move(out)};
    }

    Token lex_hex_string() {
        ++pos_;  // <
        std::string out;
        int hi = -1;
        while (pos_ < s_.size() && s_[pos_] != '>') {
            char c = s_[pos_++];
            int v = -1;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            if (v < 0) continue;
            if (hi < 0) hi = v;
            else {
                out.push_back(char(hi * 16 + v));
                hi = -1;
            }
        }
        if (hi >= 0) out.push_back(char(hi * 16));
        if (pos_ < s_.size()) ++pos_;
        return Token{Token::Kind::String, 0, std::move(out)};
    }

    Token lex_name() {
        std::size_t start = pos_++;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
               s_[pos_] != '/' && s_[pos_] != '[' && s_[pos_] != ']' && s_[pos_] != '(' &&
               s_[pos_] != '<')
            ++pos_;
        return Token{Token::Kind::Name, 0, std::string(s_.substr(start, pos_ - start))};
    }

    Token lex_number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == '.'))
            ++pos_;
        double v = 0;
        try {
            v = std::stod(std::string(s_.substr(start, pos_ - start)));
        } catch (...) {
        }
        return Token{Token::Kind::Number, v, ""};
    }

    Token lex_operator() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
               s_[pos_] != '(' && s_[pos_] != '[' && s_[pos_] != ']' && s_[pos_] != '/' &&
               s_[pos_] != '<')
            ++pos_;
        return Token{Token::Kind::Operator, 0, std::string(s_.substr(start, pos_ - start))};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<PageWord> group_glyphs_into_words(std::vector<Glyph> glyphs, double page_height_pt,
                                              int dpi) {
    std::vector<PageWord> words;
    if (glyphs.empty()) return words;

    double avg_width = 0;
    for (const auto& g : glyphs) avg_width += g.width;
    avg_width /= double(glyphs.size());
    const double join_gap = 0.25 * avg_width;

    // Lines by baseline, top first (PDF y grows upward).
    std::stable_sort(glyphs.begin(), glyphs.end(), [](const Glyph& a, const Glyph& b) {
        if (std::abs(a.y - b.y) > 0.5) return a.y > b.y;
        return a.x < b.x;
    });

    auto to_px = [&](double pt) { return int(std::lround(pt * dpi / 72.0)); };

    std::size_t i = 0;
    while (i < glyphs.size()) {
        std::size_t line_end = i + 1;
        while (line_end < glyphs.size() && std::abs(glyphs[line_end].y - glyphs[i].y) <= 0.5)
            ++line_end;
        std::size_t k = i;
        while (k < line_end) {
            std::string text = glyphs[k].text;
            double x0 = glyphs[k].x;
            double x_end = glyphs[k].x + glyphs[k].width;
            double size = glyphs[k].font_size;
            std::size_t j = k + 1;
            while (j < line_end && glyphs[j].x - x_end < join_gap) {
                text += glyphs[j].text;
                x_end = glyphs[j].x + glyphs[j].width;
                size = std::max(size, glyphs[j].font_size);
                ++j;
            }
            double baseline = glyphs[k].y;
            double top_pt = page_height_pt - (baseline + 0.8 * size);
            PageWord w;
            w.text = std::move(text);
            w.box = Rect{to_px(x0), to_px(top_pt), to_px(x_end - x0), to_px(size)};
            if (!w.text.empty() &&
                !std::all_of(w.text.begin(), w.text.end(),
                             [](unsigned char c) { return std::isspace(c); }))
                words.push_back(std::move(w));
            k = j;
        }
        i = line_end;
    }
    return words;
}

int pdf_page_count(BytesView pdf) {
    try {
        PdfDoc doc(pdf);
        return int(doc.pages().size());
    } catch (const PdfError&) {
        return 0;
    }
}

PageTextResult extract_page_text(BytesView pdf, int page_index, int dpi) {
    PageTextResult result;
    try {
        PdfDoc doc(pdf);
        auto pages = doc.pages();
        if (page_index < 0 || page_index >= int(pages.size())) {
            result.unsupported_feature = true;
            return result;
        }
        const PdfObject* page = doc.object(pages[std::size_t(page_index)]);
        if (!page) throw PdfError("missing page object");
        const double page_h_pt = parse_media_box_height(page->dict);

        // Font map: /F1 -> widths (first font wins per name).
        std::map<std::string, FontInfo> fonts;
        {
            auto at = page->dict.find("/Font");
            if (at != std::string::npos) {
                std::string_view rest(page->dict.data() + at, page->dict.size() - at);
                std::size_t i = 0;
                while ((i = rest.find("/F", i)) != std::string_view::npos) {
                    std::size_t name_end = i + 1;
                    while (name_end < rest.size() &&
                           (std::isalnum(static_cast<unsigned char>(rest[name_end]))))
                        ++name_end;
                    std::string name(rest.substr(i, name_end - i));
                    if (auto ref = PdfDoc::find_ref(std::string(rest.substr(i)), name)) {
                        if (const PdfObject* font_obj = doc.object(ref->id))
                            fonts.emplace(name, parse_font(font_obj->dict));
                    }
                    i = name_end;
                }
            }
        }

        Bytes content;
        for (int cid : PdfDoc::find_ref_array(page->dict, "/Contents")) {
            const PdfObject* cobj = doc.object(cid);
            if (!cobj || !cobj->has_stream) continue;
            Bytes data = cobj->stream;
            if (cobj->dict.find("FlateDecode") != std::string::npos) {
                try {
                    data = inflate_zlib(data);
                } catch (const Error&) {
                    throw PdfError("bad content stream");
                }
            }
            content.insert(content.end(), data.begin(), data.end());
            content.push_back('\n');
        }

        // Interpret the text operators.
        std::vector<Glyph> glyphs;
        ContentLexer lexer(content);
        std::vector<double> stack;
        std::vector<std::string> string_stack;
        double tm_x = 0, tm_y = 0, scale = 1.0;
        double line_x = 0, line_y = 0;
        double leading = 0;
        double font_size = 0;
        const FontInfo* font = nullptr;
        bool in_array = false;
        std::vector<Token> array_tokens;

        auto show_string = [&](const std::string& s) {
            for (unsigned char c : s) {
                double w = (font ? font->width_of(c) : 500) / 1000.0 * font_size * scale;
                glyphs.push_back(Glyph{std::string(1, char(c)), tm_x, tm_y, w, font_size * scale});
                tm_x += w;
            }
        };

        while (auto token = lexer.next()) {
            if (in_array) {
                if (token->kind == Token::Kind::ArrayClose) {
                    in_array = false;
                    continue;
                }
                if (token->kind == Token::Kind::String) show_string(token->text);
                else if (token->kind == Token::Kind::Number)
                    tm_x -= token->number / 1000.0 * font_size * scale;
                continue;
            }
            switch (token->kind) {
                case Token::Kind::Number:
                    stack.push_back(token->number);
                    break;
                case Token::Kind::String:
                    string_stack.push_back(token->text);
                    break;
                case Token::Kind::Name:
                    if (token->text.size() > 1 && token->text[0] == '/') {
                        auto it = fonts.find(token->text);
                        if (it != fonts.end()) font = &it->second;
                    }
                    break;
                case Token::Kind::ArrayOpen:
                    in_array = true;
                    break;
                case Token::Kind::ArrayClose:
                    break;
                case Token::Kind::Operator: {
                    const std::string& op = token->text;
                    if (op == "BT") {
                        tm_x = line_x = 0;
                        tm_y = line_y = 0;
                        scale = 1.0;
                    } else if (op == "Tf") {
                        if (!stack.empty()) font_size = stack.back();
                    } else if (op == "Tm") {
                        if (stack.size() >= 6) {
                            std::size_t n = stack.size();
                            double a = stack[n - 6], b = stack[n - 5], c = stack[n - 4],
                                   d = stack[n - 3], e = stack[n - 2], f = stack[n - 1];
                            if (std::abs(b) > 1e-9 || std::abs(c) > 1e-9)
                                result.unsupported_feature = true;  // rotation: positions off
                            scale = a != 0 ? a : 1.0;
                            (void)d;
                            tm_x = line_x = e;
                            tm_y = line_y = f;
                        }
                    } else if (op == "Td") {
                        if (stack.size() >= 2) {
                            line_x += stack[stack.size() - 2];
                            line_y += stack[stack.size() - 1];
                            tm_x = line_x;
                            tm_y = line_y;
                        }
                    } else if (op == "TD") {
                        if (stack.size() >= 2) {
                            leading = -stack[stack.size() - 1];
                            line_x += stack[stack.size() - 2];
                            line_y += stack[stack.size() - 1];
                            tm_x = line_x;
                            tm_y = line_y;
                        }
                    } else if (op == "TL") {
                        if (!stack.empty()) leading = stack.back();
                    } else if (op == "T*") {
                        line_y -= leading;
                        tm_x = line_x;
                        tm_y = line_y;
                    } else if (op == "Tj") {
                        if (!string_stack.empty()) show_string(string_stack.back());
                    } else if (op == "'") {
                        line_y -= leading;
                        tm_x = line_x;
                        tm_y = line_y;
                        if (!string_stack.empty()) show_string(string_stack.back());
                    } else if (op == "Do" || op == "BI") {
                        result.unsupported_feature = true;
                    }
                    stack.clear();
                    string_stack.clear();
                    break;
                }
            }
        }

        result.words = group_glyphs_into_words(std::move(glyphs), page_h_pt, dpi);
        // Words arrive top-to-bottom, left-to-right; join lines with LF.
        std::string text;
        const PageWord* prev = nullptr;
        for (const auto& w : result.words) {
            if (prev) text += (std::abs(w.box.y - prev->box.y) > w.box.h / 2) ? '\n' : ' ';
            text += w.text;
            prev = &w;
        }
        result.page_text = std::move(text);
    } catch (const PdfError& e) {
        result.unsupported_feature = true;
        result.page_text.clear();
        result.words.clear();
        (void)e;
    } catch (const Error&) {
        result.unsupported_feature = true;
    }
    return result;
}

}  // namespace dh::annotate
