#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dh/core/error.hpp"

namespace dh::quality {

class CorpusTooSmall : public Error {
public:
    using Error::Error;
};

// Interpolated Kneser-Ney with one absolute discount per order, estimated
// from counts-of-counts as D = n1 / (n1 + 2*n2). Unseen mass bottoms out in a
// uniform distribution over the vocabulary plus an unknown token, so no
// probability is ever zero.
class KneserNeyModel {
public:
    static constexpr int kDefaultOrder = 5;

    static KneserNeyModel train(const std::vector<std::string>& tokens, int order);

    int order() const { return order_; }
    std::size_t vocab_size() const { return vocabulary_.size(); }
    const std::set<std::string>& vocabulary() const { return vocabulary_; }
    double discount(int order_n) const { return discounts_[std::size_t(order_n - 1)]; }

    // P(token | last order-1 entries of context); shorter contexts evaluate
    // at the matching lower order.
    double prob(const std::vector<std::string>& context, const std::string& token) const;

    // exp(-(1/T) * sum log P); tokens must be non-empty.
    double perplexity(const std::vector<std::string>& tokens) const;

    // Sorted text: header lines then one n-gram per line with its count and
    // continuation count.
    std::string serialize() const;
    static KneserNeyModel parse(const std::string& text);

private:
    double prob_order(int n, const std::vector<std::string>& context,
                      const std::string& token) const;

    static std::string join(const std::vector<std::string>& tokens, std::size_t first,
                            std::size_t count);

    int order_ = 0;
    std::set<std::string> vocabulary_;
    // counts_[n-1]: n-gram -> regular count
    std::vector<std::map<std::string, std::uint64_t>> counts_;
    // continuation_[n-1]: n-gram -> number of distinct preceding tokens
    std::vector<std::map<std::string, std::uint64_t>> continuation_;
    // context_total_[n-1]: (n-1)-gram context -> total count at order n
    std::vector<std::map<std::string, std::uint64_t>> context_total_;
    // context_cont_total_[n-1]: context -> sum of continuation counts
    std::vector<std::map<std::string, std::uint64_t>> context_cont_total_;
    // distinct_follow_[n-1]: context -> distinct continuations (N1+(ctx .))
    std::vector<std::map<std::string, std::uint64_t>> distinct_follow_;
    std::vector<double> discounts_;
    std::uint64_t unigram_cont_total_ = 0;  // distinct bigram count
    std::uint64_t token_total_ = 0;
};

// Whitespace tokenization with lowercasing; the adapter the perplexity path
// uses in place of a subword tokenizer.
std::vector<std::string> tokenize_for_lm(const std::string& text);

}  // namespace dh::quality
