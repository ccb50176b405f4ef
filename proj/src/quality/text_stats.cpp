#include "dh/quality/text_stats.hpp"

#include "dh/core/utf8.hpp"

namespace dh::quality {

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
        case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punctuation(char32_t cp) {
    // ASCII P* (note: $ + < = > ^ ` | ~ are symbols, not punctuation)
    if (cp < 0x80) {
        switch (cp) {
            case U'!': case U'"': case U'#': case U'%': case U'&': case U'\'':
            case U'(': case U')': case U'*': case U',': case U'-': case U'.':
            case U'/': case U':': case U';': case U'?': case U'@': case U'[':
            case U'\\': case U']': case U'_': case U'{': case U'}':
                return true;
            default:
                return false;
        }
    }
    // Latin-1 punctuation
    if (cp == 0xA1 || cp == 0xA7 || cp == 0xAB || cp == 0xB6 || cp == 0xB7 || cp == 0xBB ||
        cp == 0xBF)
        return true;
    // General punctuation block (dashes, quotes, ellipsis, bullets)
    if (cp >= 0x2010 && cp <= 0x2027) return true;
    if (cp >= 0x2030 && cp <= 0x205E) return true;
    // CJK symbols and fullwidth forms commonly used as punctuation
    if (cp >= 0x3001 && cp <= 0x3011) return true;
    if (cp == 0x30FB) return true;
    if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
    if (cp >= 0xFF1A && cp <= 0xFF1F) return true;
    if (cp >= 0xFF3B && cp <= 0xFF3F) return true;
    if (cp >= 0xFF5B && cp <= 0xFF65) return true;
    return false;
}

bool is_numeric(char32_t cp) {
    if (cp >= U'0' && cp <= U'9') return true;
    if (cp >= 0xFF10 && cp <= 0xFF19) return true;  // fullwidth digits
    if (cp >= 0x0660 && cp <= 0x0669) return true;  // Arabic-Indic
    if (cp >= 0x06F0 && cp <= 0x06F9) return true;
    if (cp >= 0x0966 && cp <= 0x096F) return true;  // Devanagari
    return false;
}

bool is_alpha(char32_t cp) {
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
    if (cp < 0x80) return false;
    if (is_space(cp) || is_punctuation(cp) || is_numeric(cp)) return false;
    // Letter-bearing ranges; a pragmatic approximation of Unicode L*.
    if (cp >= 0xC0 && cp <= 0x24F) return true;       // Latin supplements
    if (cp >= 0x370 && cp <= 0x3FF) return true;      // Greek
    if (cp >= 0x400 && cp <= 0x52F) return true;      // Cyrillic
    if (cp >= 0x530 && cp <= 0x58F) return true;      // Armenian
    if (cp >= 0x590 && cp <= 0x5FF) return true;      // Hebrew
    if (cp >= 0x600 && cp <= 0x6FF) return true;      // Arabic
    if (cp >= 0x900 && cp <= 0x97F) return true;      // Devanagari
    if (cp >= 0xE00 && cp <= 0xE7F) return true;      // Thai
    if (cp >= 0x10A0 && cp <= 0x10FF) return true;    // Georgian
    if (cp >= 0x1E00 && cp <= 0x1FFF) return true;    // Latin/Greek extended
    if (cp >= 0x3040 && cp <= 0x30FF && cp != 0x30FB) return true;  // kana
    if (cp >= 0x4E00 && cp <= 0x9FFF) return true;    // CJK unified
    if (cp >= 0xAC00 && cp <= 0xD7AF) return true;    // Hangul
    return false;
}

std::vector<std::string> words_of(const std::string& text) {
    std::vector<std::string> words;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            words.push_back(current);
            current.clear();
        }
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = utf8_next(text, pos);
        if (is_space(cp)) {
            flush();
            continue;
        }
        if (is_punctuation(cp)) continue;  // punctuation removed
        utf8_append(current, cp);
    }
    flush();
    return words;
}

TextStats text_stats(const std::string& text) {
    TextStats stats;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = utf8_next(text, pos);
        ++stats.char_count;
        if (is_alpha(cp)) ++stats.alpha_chars;
        else if (is_numeric(cp)) ++stats.numeric_chars;
    }
    stats.word_count = words_of(text).size();
    if (stats.char_count > 0)
        stats.alnum_proportion =
            double(stats.alpha_chars + stats.numeric_chars) / double(stats.char_count);
    stats.alpha_to_numeric_ratio = stats.numeric_chars > 0
                                       ? double(stats.alpha_chars) / double(stats.numeric_chars)
                                       : double(stats.alpha_chars);
    return stats;
}

}  // namespace dh::quality
