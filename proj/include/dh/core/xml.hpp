#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dh::xml {

// Minimal mutable DOM. Element names keep their prefix ("w:p"); text nodes
// have an empty name. Good enough for WordprocessingML parts, relationship
// files and the colorization edits; not a general-purpose XML library.
struct Node {
    std::string name;  // empty => text node
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<Node> children;
    std::string text;  // text nodes only

    bool is_text() const { return name.empty(); }
    bool is_element() const { return !name.empty(); }

    std::optional<std::string_view> attr(std::string_view key) const;
    void set_attr(std::string_view key, std::string_view value);
    void remove_attr(std::string_view key);

    Node* child(std::string_view name);
    const Node* child(std::string_view name) const;
    std::vector<const Node*> children_named(std::string_view name) const;
    std::vector<Node*> children_named(std::string_view name);

    // Finds or creates a leading child element (WordprocessingML property
    // containers like w:pPr/w:rPr must come first).
    Node& ensure_front_child(std::string_view name);
    Node& append_child(std::string_view name);

    // Concatenated text of all descendant text nodes.
    std::string all_text() const;

    // Depth-first walk over descendant elements (self excluded).
    void walk(const std::function<void(const Node&)>& fn) const;
    void walk(const std::function<void(Node&)>& fn);
};

Node parse(std::string_view doc);            // throws XmlError
std::string serialize(const Node& root, bool xml_declaration = true);

std::string escape_text(std::string_view s);
std::string escape_attr(std::string_view s);

// Resolves a child-index path ("2.0.5") from root. Returns nullptr when the
// path does not resolve to an element.
Node* resolve_path(Node& root, std::string_view path);
std::string join_path(const std::vector<std::size_t>& indices);

}  // namespace dh::xml
