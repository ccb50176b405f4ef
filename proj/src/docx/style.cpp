#include "dh/docx/style.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace dh::docx {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

// On/off properties (w:b, w:i): present means on unless w:val says otherwise.
bool toggle_value(const xml::Node& prop) {
    auto val = prop.attr("w:val");
    if (!val) return true;
    return !(*val == "0" || *val == "false" || *val == "none" || *val == "off");
}

}  // namespace

FormatPatch FormatPatch::from_rpr(const xml::Node& rpr) {
    FormatPatch p;
    if (const auto* sz = rpr.child("w:sz")) {
        if (auto val = sz->attr("w:val")) {
            try {
                p.font_size_half_points = std::stoi(std::string(*val));
            } catch (...) {
            }
        }
    }
    if (const auto* b = rpr.child("w:b")) p.bold = toggle_value(*b);
    if (const auto* i = rpr.child("w:i")) p.italic = toggle_value(*i);
    if (const auto* u = rpr.child("w:u")) {
        auto val = u->attr("w:val");
        p.underline = !val || *val != "none";
    }
    return p;
}

void FormatPatch::apply_to(RunFormat& fmt) const {
    if (font_size_half_points) fmt.font_size_half_points = *font_size_half_points;
    if (bold) fmt.bold = *bold;
    if (italic) fmt.italic = *italic;
    if (underline) fmt.underline = *underline;
}

StyleRegistry StyleRegistry::from_styles_part(const xml::Node& styles_root) {
    StyleRegistry reg;
    if (const auto* defaults = styles_root.child("w:docDefaults")) {
        if (const auto* rpr_default = defaults->child("w:rPrDefault")) {
            if (const auto* rpr = rpr_default->child("w:rPr"))
                FormatPatch::from_rpr(*rpr).apply_to(reg.defaults_);
        }
    }
    for (const auto* style : styles_root.children_named("w:style")) {
        auto id = style->attr("w:styleId");
        if (!id) continue;
        StyleDef def;
        def.id = std::string(*id);
        if (auto type = style->attr("w:type")) def.type = std::string(*type);
        if (const auto* based_on = style->child("w:basedOn")) {
            if (auto val = based_on->attr("w:val")) def.based_on = std::string(*val);
        }
        if (const auto* name = style->child("w:name")) {
            if (auto val = name->attr("w:val")) def.name = std::string(*val);
        }
        if (const auto* rpr = style->child("w:rPr")) def.patch = FormatPatch::from_rpr(*rpr);
        reg.styles_[lower(def.id)] = std::move(def);
    }
    return reg;
}

const StyleDef* StyleRegistry::find(std::string_view style_id) const {
    auto it = styles_.find(lower(style_id));
    return it == styles_.end() ? nullptr : &it->second;
}

RunFormat StyleRegistry::effective_format(std::string_view style_id) const {
    // Walk the basedOn chain, then apply patches root-first so derived
    // styles override their ancestors.
    std::vector<const StyleDef*> chain;
    const StyleDef* cur = find(style_id);
    while (cur && chain.size() < 16) {
        if (std::find(chain.begin(), chain.end(), cur) != chain.end()) break;
        chain.push_back(cur);
        cur = cur->based_on.empty() ? nullptr : find(cur->based_on);
    }
    RunFormat fmt = defaults_;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) (*it)->patch.apply_to(fmt);
    return fmt;
}

std::optional<Category> builtin_style_category(std::string_view style_id) {
    std::string id = lower(style_id);
    if (id == "title") return Category::Title;
    if (id.rfind("heading", 0) == 0 && id.size() == 8 && id[7] >= '1' && id[7] <= '9')
        return heading_level(id[7] - '0');
    if (id == "quote" || id == "intensequote" || id == "blockquote") return Category::Quote;
    if (id == "caption") return Category::TableCaption;
    if (id == "footnotetext" || id == "endnotetext") return Category::Footnote;
    if (id == "bibliography") return Category::Bibliography;
    if (id == "listparagraph" || id == "list" || id.rfind("listbullet", 0) == 0 ||
        id.rfind("listnumber", 0) == 0 || id.rfind("listcontinue", 0) == 0 ||
        (id.size() == 5 && id.rfind("list", 0) == 0 && std::isdigit(static_cast<unsigned char>(id[4]))))
        return Category::ListItem;
    if (id == "tocheading" || id == "tableofcontents" ||
        (id.size() == 4 && id.rfind("toc", 0) == 0 && id[3] >= '1' && id[3] <= '9'))
        return Category::TableOfContents;
    if (id == "commenttext" || id == "annotationtext") return Category::Annotation;
    if (id == "header") return Category::Header;
    if (id == "footer") return Category::Footer;
    if (id.rfind("bodytext", 0) == 0) return Category::PlainText;
    // "Normal" stays unmapped: it is the implicit default everywhere, so it
    // carries no user intent and would swallow the heuristic passes.
    return std::nullopt;
}

}  // namespace dh::docx
