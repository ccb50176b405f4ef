#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dh::quality {

struct TextStats {
    std::size_t char_count = 0;   // Unicode scalar values
    std::size_t word_count = 0;   // whitespace-delimited, punctuation removed
    std::size_t alpha_chars = 0;
    std::size_t numeric_chars = 0;
    double alnum_proportion = 0.0;
    double alpha_to_numeric_ratio = 0.0;  // inf encoded as numeric_chars==0 ? alpha : ratio
};

TextStats text_stats(const std::string& text);

// Whitespace-delimited tokens with punctuation stripped; empty results drop.
std::vector<std::string> words_of(const std::string& text);

bool is_punctuation(char32_t cp);
bool is_alpha(char32_t cp);
bool is_numeric(char32_t cp);
bool is_space(char32_t cp);

}  // namespace dh::quality
