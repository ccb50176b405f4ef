#include <algorithm>
#include <map>
#include <set>

#include "dh/core/utf8.hpp"
#include "dh/docx/model.hpp"

namespace dh::docx {

namespace {

constexpr std::size_t kMaxHeadingChars = 200;
constexpr std::size_t kMinUnderscoreRun = 8;

bool is_paragraph_like(SourceKind k) {
    switch (k) {
        case SourceKind::BodyParagraph:
        case SourceKind::TextBoxParagraph:
        case SourceKind::HeaderParagraph:
        case SourceKind::FooterParagraph:
        case SourceKind::FootnoteParagraph:
        case SourceKind::CommentParagraph:
            return true;
        default:
            return false;
    }
}

std::optional<Category> xmltag_category(const DocElement& e) {
    switch (e.source) {
        case SourceKind::Table: return Category::Table;
        case SourceKind::TableCell: return Category::TableCell;  // refined below
        case SourceKind::HeaderRow: return Category::TableHeader;
        case SourceKind::Figure: return Category::Figure;
        case SourceKind::Equation: return Category::Equation;
        case SourceKind::TextBoxParagraph: return Category::PlainText;
        case SourceKind::HeaderParagraph: return Category::Header;
        case SourceKind::FooterParagraph: return Category::Footer;
        case SourceKind::FootnoteParagraph: return Category::Footnote;
        case SourceKind::CommentParagraph: return Category::Annotation;
        case SourceKind::TocBlock: return Category::TableOfContents;
        case SourceKind::FormFieldParagraph: return Category::FormField;
        case SourceKind::FormTagBlock: return Category::FormTag;
        default: return std::nullopt;
    }
}

bool is_bullet_char(char32_t cp) {
    switch (cp) {
        case U'•':  // •
        case U'◦':  // ◦
        case U'▪':  // ▪
        case U'–':  // –
        case U'-':
        case U'*':
        case U'·':  // ·
            return true;
        default:
            return false;
    }
}

bool is_digit_cp(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

// Every line break immediately followed by a digit or bullet; at least one
// line break so single-line prose never qualifies.
bool looks_like_list(const std::string& text) {
    auto cps = utf8_decode(text);
    bool saw_break = false;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] != U'\n') continue;
        saw_break = true;
        if (i + 1 >= cps.size()) return false;
        char32_t next = cps[i + 1];
        if (!is_digit_cp(next) && !is_bullet_char(next)) return false;
    }
    return saw_break;
}

// A run of >= 8 underscores with non-underscore characters below half.
bool looks_like_form_field(const std::string& text) {
    auto cps = utf8_decode(text);
    if (cps.empty()) return false;
    std::size_t run = 0, best_run = 0, underscores = 0;
    for (char32_t cp : cps) {
        if (cp == U'_') {
            ++underscores;
            best_run = std::max(best_run, ++run);
        } else {
            run = 0;
        }
    }
    if (best_run < kMinUnderscoreRun) return false;
    std::size_t non_underscore = cps.size() - underscores;
    return non_underscore * 2 < cps.size();
}

}  // namespace

void classify_elements(DocumentModel& model, const StyleRegistry& styles) {
    (void)styles;
    std::set<std::string> unmapped;

    // Pass 1: built-in styles.
    for (auto& e : model.elements) {
        if (e.classified || !e.styling.style_name) continue;
        if (auto cat = builtin_style_category(*e.styling.style_name)) {
            e.category = *cat;
            e.provenance = Provenance::BuiltinStyle;
            e.classified = true;
        } else {
            unmapped.insert(*e.styling.style_name);
        }
    }

    // Pass 2: native XML tags.
    for (auto& e : model.elements) {
        if (e.classified) continue;
        if (auto cat = xmltag_category(e)) {
            e.category = *cat;
            if (e.source == SourceKind::TableCell && e.table_index >= 0 && e.cell_index >= 0) {
                const auto& cell = model.tables[std::size_t(e.table_index)].cells[std::size_t(e.cell_index)];
                if (cell.is_header_cell) e.category = Category::TableHeaderCell;
            }
            e.provenance = Provenance::XmlTag;
            e.classified = true;
        }
    }

    // Pass 3: identical applied styling to a built-in-classified element.
    {
        struct SigKey {
            int size;
            bool bold, underline, italic;
            bool operator<(const SigKey& o) const {
                return std::tie(size, bold, underline, italic) <
                       std::tie(o.size, o.bold, o.underline, o.italic);
            }
        };
        struct Vote {
            std::size_t count = 0;
            int first_element = 0;
        };
        std::map<SigKey, std::map<Category, Vote>> votes;
        for (const auto& e : model.elements) {
            if (!e.classified || e.provenance != Provenance::BuiltinStyle) continue;
            SigKey key{e.styling.font_size_half_points, e.styling.bold, e.styling.underline,
                       e.styling.italic};
            auto& vote = votes[key][e.category];
            if (vote.count == 0) vote.first_element = e.element_id;
            ++vote.count;
        }
        for (auto& e : model.elements) {
            if (e.classified || !is_paragraph_like(e.source)) continue;
            SigKey key{e.styling.font_size_half_points, e.styling.bold, e.styling.underline,
                       e.styling.italic};
            auto it = votes.find(key);
            if (it == votes.end()) continue;
            // Most frequent category, then earliest element in document order.
            const std::pair<const Category, Vote>* best = nullptr;
            for (const auto& entry : it->second) {
                if (!best || entry.second.count > best->second.count ||
                    (entry.second.count == best->second.count &&
                     entry.second.first_element < best->second.first_element))
                    best = &entry;
            }
            e.category = best->first;
            e.provenance = Provenance::HeuristicStyleMatch;
            e.classified = true;
        }
    }

    // Pass 4: content heuristics.
    for (auto& e : model.elements) {
        if (e.classified || !is_paragraph_like(e.source)) continue;
        if (looks_like_list(e.text)) {
            e.category = Category::ListItem;
            e.provenance = Provenance::HeuristicContent;
            e.classified = true;
        } else if (looks_like_form_field(e.text)) {
            e.category = Category::FormField;
            e.provenance = Provenance::HeuristicContent;
            e.classified = true;
        }
    }

    // Pass 5: font-size ranking for the remaining text elements.
    {
        // Modal size over all text-bearing paragraph-like elements.
        std::map<int, std::size_t> size_freq;
        for (const auto& e : model.elements)
            if (is_paragraph_like(e.source) && !e.text.empty())
                ++size_freq[e.styling.font_size_half_points];
        int mode_size = 0;
        std::size_t mode_count = 0;
        for (const auto& [size, count] : size_freq) {
            if (count > mode_count) {
                mode_size = size;
                mode_count = count;
            }
        }
        int max_size = 0;
        for (const auto& [size, _] : size_freq) max_size = std::max(max_size, size);

        // Signature uniqueness across the whole document (format fields only).
        auto format_count = [&](const StyleSignature& sig) {
            std::size_t n = 0;
            for (const auto& e : model.elements)
                if (is_paragraph_like(e.source) && e.styling.format_equals(sig)) ++n;
            return n;
        };

        std::vector<int> ranked_sizes;  // sizes above the mode, descending
        for (auto it = size_freq.rbegin(); it != size_freq.rend(); ++it)
            if (it->first > mode_size) ranked_sizes.push_back(it->first);

        for (auto& e : model.elements) {
            if (e.classified || !is_paragraph_like(e.source) || e.text.empty()) continue;
            const int size = e.styling.font_size_half_points;
            if (size == max_size && size > mode_size && e.char_count <= kMaxHeadingChars &&
                format_count(e.styling) == 1) {
                e.category = Category::Title;
                e.provenance = Provenance::HeuristicFontRank;
                e.classified = true;
                continue;
            }
            auto rank = std::find(ranked_sizes.begin(), ranked_sizes.end(), size);
            if (rank != ranked_sizes.end()) {
                std::size_t level = std::size_t(rank - ranked_sizes.begin()) + 1;
                e.category = (level <= 9 && e.char_count <= kMaxHeadingChars)
                                 ? heading_level(int(level))
                                 : Category::PlainText;
            } else {
                e.category = Category::PlainText;  // at or below the mode
            }
            e.provenance = Provenance::HeuristicFontRank;
            e.classified = true;
        }
    }

    // Fallback: everything left is plain text.
    for (auto& e : model.elements) {
        if (e.classified) continue;
        e.category = Category::PlainText;
        e.provenance = Provenance::FallbackPlainText;
        e.classified = true;
    }

    model.unmapped_styles.assign(unmapped.begin(), unmapped.end());
}

}  // namespace dh::docx
