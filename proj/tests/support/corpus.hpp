#pragma once

#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"

namespace dh::test {

struct CorpusDoc {
    std::string name;  // "doc00.docx"
    Bytes bytes;
};

// Synthetic multi-element documents with enough text to clear the length
// floor; seeded so every run builds the same corpus.
std::vector<CorpusDoc> make_fixture_corpus(std::size_t count, std::uint64_t seed);

// Filler prose of roughly `words` words in the requested language flavor.
std::string filler_text(std::size_t words, std::uint64_t seed, const std::string& lang = "en");

}  // namespace dh::test
