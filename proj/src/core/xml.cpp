#include "dh/core/xml.hpp"

#include <cstdlib>

#include "dh/core/error.hpp"
#include "dh/core/utf8.hpp"

namespace dh::xml {

namespace {

class Parser {
public:
    explicit Parser(std::string_view doc) : s_(doc) {}

    Node run() {
        skip_prolog();
        Node root = parse_element();
        return root;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw XmlError(msg + " at offset " + std::to_string(pos_));
    }

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    bool lookahead(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n'))
            ++pos_;
    }

    void expect(char c) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_until(std::string_view terminator) {
        auto at = s_.find(terminator, pos_);
        if (at == std::string_view::npos) fail("unterminated construct");
        pos_ = at + terminator.size();
    }

    void skip_misc() {
        for (;;) {
            skip_ws();
            if (lookahead("<!--")) {
                pos_ += 4;
                skip_until("-->");
            } else if (lookahead("<?")) {
                pos_ += 2;
                skip_until("?>");
            } else if (lookahead("<!DOCTYPE")) {
                skip_until(">");
            } else {
                return;
            }
        }
    }

    void skip_prolog() { skip_misc(); }

    std::string parse_name() {
        std::size_t start = pos_;
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '>' || c == '/' ||
                c == '=')
                break;
            ++pos_;
        }
        if (pos_ == start) fail("expected name");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string decode_entities(std::string_view raw) {
        if (raw.find('&') == std::string_view::npos) return std::string(raw);
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size();) {
            if (raw[i] != '&') {
                out.push_back(raw[i++]);
                continue;
            }
            auto end = raw.find(';', i);
            if (end == std::string_view::npos) {
                out.push_back(raw[i++]);
                continue;
            }
            std::string_view ent = raw.substr(i + 1, end - i - 1);
            if (ent == "amp") out.push_back('&');
            else if (ent == "lt") out.push_back('<');
            else if (ent == "gt") out.push_back('>');
            else if (ent == "quot") out.push_back('"');
            else if (ent == "apos") out.push_back('\'');
            else if (!ent.empty() && ent[0] == '#') {
                char32_t cp = 0;
                if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                    cp = static_cast<char32_t>(std::strtoul(std::string(ent.substr(2)).c_str(), nullptr, 16));
                else
                    cp = static_cast<char32_t>(std::strtoul(std::string(ent.substr(1)).c_str(), nullptr, 10));
                utf8_append(out, cp);
            } else {
                // Unknown entity, keep literal.
                out.append(raw.substr(i, end - i + 1));
            }
            i = end + 1;
        }
        return out;
    }

    std::string parse_attr_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
        char quote = peek();
        ++pos_;
        std::size_t start = pos_;
        while (!eof() && peek() != quote) ++pos_;
        if (eof()) fail("unterminated attribute value");
        std::string value = decode_entities(s_.substr(start, pos_ - start));
        ++pos_;
        return value;
    }

    Node parse_element() {
        expect('<');
        Node node;
        node.name = parse_name();
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated tag");
            if (peek() == '/') {
                ++pos_;
                expect('>');
                return node;  // self-closing
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            std::string key = parse_name();
            skip_ws();
            expect('=');
            skip_ws();
            node.attrs.emplace_back(std::move(key), parse_attr_value());
        }
        // Content.
        for (;;) {
            if (eof()) fail("unterminated element <" + node.name + ">");
            if (peek() == '<') {
                if (lookahead("</")) {
                    pos_ += 2;
                    std::string closing = parse_name();
                    if (closing != node.name)
                        fail("mismatched close tag </" + closing + "> for <" + node.name + ">");
                    skip_ws();
                    expect('>');
                    return node;
                }
                if (lookahead("<!--")) {
                    pos_ += 4;
                    skip_until("-->");
                    continue;
                }
                if (lookahead("<![CDATA[")) {
                    pos_ += 9;
                    auto end = s_.find("]]>", pos_);
                    if (end == std::string_view::npos) fail("unterminated CDATA");
                    Node text;
                    text.text = std::string(s_.substr(pos_, end - pos_));
                    node.children.push_back(std::move(text));
                    pos_ = end + 3;
                    continue;
                }
                if (lookahead("<?")) {
                    pos_ += 2;
                    skip_until("?>");
                    continue;
                }
                node.children.push_back(parse_element());
                continue;
            }
            std::size_t start = pos_;
            while (!eof() && peek() != '<') ++pos_;
            Node text;
            text.text = decode_entities(s_.substr(start, pos_ - start));
            node.children.push_back(std::move(text));
        }
    }
};

void serialize_node(const Node& n, std::string& out) {
    if (n.is_text()) {
        out += escape_text(n.text);
        return;
    }
    out += '<';
    out += n.name;
    for (const auto& [k, v] : n.attrs) {
        out += ' ';
        out += k;
        out += "=\"";
        out += escape_attr(v);
        out += '"';
    }
    if (n.children.empty()) {
        out += "/>";
        return;
    }
    out += '>';
    for (const auto& c : n.children) serialize_node(c, out);
    out += "</";
    out += n.name;
    out += '>';
}

}  // namespace

std::optional<std::string_view> Node::attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
        if (k == key) return std::string_view(v);
    return std::nullopt;
}

void Node::set_attr(std::string_view key, std::string_view value) {
    for (auto& [k, v] : attrs) {
        if (k == key) {
            v = std::string(value);
            return;
        }
    }
    attrs.emplace_back(std::string(key), std::string(value));
}

void Node::remove_attr(std::string_view key) {
    std::erase_if(attrs, [&](const auto& kv) { return kv.first == key; });
}

Node* Node::child(std::string_view name) {
    for (auto& c : children)
        if (c.name == name) return &c;
    return nullptr;
}

const Node* Node::child(std::string_view name) const {
    for (const auto& c : children)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view name) const {
    std::vector<const Node*> out;
    for (const auto& c : children)
        if (c.name == name) out.push_back(&c);
    return out;
}

std::vector<Node*> Node::children_named(std::string_view name) {
    std::vector<Node*> out;
    for (auto& c : children)
        if (c.name == name) out.push_back(&c);
    return out;
}

Node& Node::ensure_front_child(std::string_view name) {
    if (Node* existing = child(name)) return *existing;
    Node n;
    n.name = std::string(name);
    children.insert(children.begin(), std::move(n));
    return children.front();
}

Node& Node::append_child(std::string_view name) {
    Node n;
    n.name = std::string(name);
    children.push_back(std::move(n));
    return children.back();
}

std::string Node::all_text() const {
    std::string out;
    if (is_text()) return text;
    for (const auto& c : children) {
        if (c.is_text()) out += c.text;
        else out += c.all_text();
    }
    return out;
}

void Node::walk(const std::function<void(const Node&)>& fn) const {
    for (const auto& c : children) {
        if (c.is_element()) {
            fn(c);
            c.walk(fn);
        }
    }
}

void Node::walk(const std::function<void(Node&)>& fn) {
    for (auto& c : children) {
        if (c.is_element()) {
            fn(c);
            c.walk(fn);
        }
    }
}

Node parse(std::string_view doc) {
    // Tolerate a UTF-8 BOM.
    if (doc.size() >= 3 && static_cast<unsigned char>(doc[0]) == 0xef &&
        static_cast<unsigned char>(doc[1]) == 0xbb && static_cast<unsigned char>(doc[2]) == 0xbf)
        doc.remove_prefix(3);
    Parser p(doc);
    return p.run();
}

std::string serialize(const Node& root, bool xml_declaration) {
    std::string out;
    if (xml_declaration) out = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
    serialize_node(root, out);
    return out;
}

std::string escape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
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

std::string escape_attr(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\n': out += "&#10;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

Node* resolve_path(Node& root, std::string_view path) {
    Node* cur = &root;
    std::size_t i = 0;
    while (i < path.size()) {
        std::size_t dot = path.find('.', i);
        std::string_view tok = path.substr(i, dot == std::string_view::npos ? path.size() - i : dot - i);
        std::size_t idx = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') return nullptr;
            idx = idx * 10 + std::size_t(c - '0');
        }
        if (idx >= cur->children.size()) return nullptr;
        cur = &cur->children[idx];
        if (dot == std::string_view::npos) break;
        i = dot + 1;
    }
    return cur->is_element() ? cur : nullptr;
}

std::string join_path(const std::vector<std::size_t>& indices) {
    std::string out;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(indices[i]);
    }
    return out;
}

}  // namespace dh::xml
