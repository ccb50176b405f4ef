#include "dh/quality/kneser_ney.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dh/core/utf8.hpp"
#include "dh/quality/text_stats.hpp"

namespace dh::quality {

namespace {

constexpr char kSep = '\x1f';

double clamp_discount(double d) { return std::clamp(d, 0.05, 0.95); }

char32_t lower_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;   // Latin-1
    if (cp >= 0x410 && cp <= 0x42F) return cp + 32;               // Cyrillic
    if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;  // Greek
    return cp;
}

}  // namespace

std::vector<std::string> tokenize_for_lm(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = utf8_next(text, pos);
        if (is_space(cp)) {
            if (!current.empty()) {
                tokens.push_back(current);
                current.clear();
            }
            continue;
        }
        utf8_append(current, lower_cp(cp));
    }
    if (!current.empty()) tokens.push_back(current);
    return tokens;
}

std::string KneserNeyModel::join(const std::vector<std::string>& tokens, std::size_t first,
                                 std::size_t count) {
    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
        if (i) out += kSep;
        out += tokens[first + i];
    }
    return out;
}

KneserNeyModel KneserNeyModel::train(const std::vector<std::string>& tokens, int order) {
    if (order < 1) throw Error("order must be >= 1");
    if (tokens.size() < std::size_t(order))
        throw CorpusTooSmall("corpus of " + std::to_string(tokens.size()) +
                             " tokens cannot fit order " + std::to_string(order));
    KneserNeyModel m;
    m.order_ = order;
    m.token_total_ = tokens.size();
    m.counts_.resize(std::size_t(order));
    m.continuation_.resize(std::size_t(order));
    m.context_total_.resize(std::size_t(order));
    m.context_cont_total_.resize(std::size_t(order));
    m.distinct_follow_.resize(std::size_t(order));
    m.vocabulary_.insert(tokens.begin(), tokens.end());

    for (int n = 1; n <= order; ++n) {
        auto& counts = m.counts_[std::size_t(n - 1)];
        for (std::size_t i = 0; i + std::size_t(n) <= tokens.size(); ++i)
            ++counts[join(tokens, i, std::size_t(n))];
    }
    // Continuation counts: distinct left extensions per n-gram, n < order.
    for (int n = 1; n < order; ++n) {
        const auto& higher = m.counts_[std::size_t(n)];
        auto& cont = m.continuation_[std::size_t(n - 1)];
        for (const auto& [ngram, _] : higher) {
            auto cut = ngram.find(kSep);
            cont[ngram.substr(cut + 1)] += 1;
        }
    }
    // Context aggregates.
    for (int n = 2; n <= order; ++n) {
        const auto& counts = m.counts_[std::size_t(n - 1)];
        auto& totals = m.context_total_[std::size_t(n - 1)];
        auto& follows = m.distinct_follow_[std::size_t(n - 1)];
        for (const auto& [ngram, c] : counts) {
            auto cut = ngram.rfind(kSep);
            std::string ctx = ngram.substr(0, cut);
            totals[ctx] += c;
            follows[ctx] += 1;
        }
        const auto& cont = m.continuation_[std::size_t(n - 1)];
        auto& cont_totals = m.context_cont_total_[std::size_t(n - 1)];
        for (const auto& [ngram, cc] : cont) {
            auto cut = ngram.rfind(kSep);
            if (cut == std::string::npos) continue;
            cont_totals[ngram.substr(0, cut)] += cc;
        }
    }
    for (const auto& [_, cc] : m.continuation_[0]) m.unigram_cont_total_ += cc;

    // Absolute discount per order from counts-of-counts.
    m.discounts_.resize(std::size_t(order));
    for (int n = 1; n <= order; ++n) {
        std::uint64_t n1 = 0, n2 = 0;
        for (const auto& [_, c] : m.counts_[std::size_t(n - 1)]) {
            if (c == 1) ++n1;
            else if (c == 2) ++n2;
        }
        double d = (n1 + 2 * n2) > 0 ? double(n1) / double(n1 + 2 * n2) : 0.5;
        m.discounts_[std::size_t(n - 1)] = clamp_discount(d);
    }
    return m;
}

double KneserNeyModel::prob_order(int n, const std::vector<std::string>& context,
                                  const std::string& token) const {
    const double uniform = 1.0 / double(vocabulary_.size() + 1);  // vocab plus unknown
    if (n <= 0) return uniform;
    if (n == 1) {
        const double d = discounts_[0];
        if (order_ == 1) {
            // Raw unigram counts with absolute discounting.
            double total = double(token_total_);
            auto it = counts_[0].find(token);
            double c = it == counts_[0].end() ? 0.0 : double(it->second);
            double distinct = double(counts_[0].size());
            return std::max(c - d, 0.0) / total + d * distinct / total * uniform;
        }
        // Continuation unigram distribution.
        double total = double(unigram_cont_total_);
        if (total <= 0) return uniform;
        auto it = continuation_[0].find(token);
        double cc = it == continuation_[0].end() ? 0.0 : double(it->second);
        double distinct = 0;
        for (const auto& [_, v] : continuation_[0]) distinct += v > 0 ? 1 : 0;
        return std::max(cc - d, 0.0) / total + d * distinct / total * uniform;
    }

    // Use the last n-1 context tokens.
    std::size_t ctx_len = std::size_t(n - 1);
    std::vector<std::string> ctx(context.end() - std::ptrdiff_t(ctx_len), context.end());
    std::string ctx_key = join(ctx, 0, ctx.size());
    std::string ngram_key = ctx_key + kSep + token;
    std::vector<std::string> shorter(ctx.begin() + 1, ctx.end());
    const double d = discounts_[std::size_t(n - 1)];

    if (n == order_) {
        auto total_it = context_total_[std::size_t(n - 1)].find(ctx_key);
        if (total_it == context_total_[std::size_t(n - 1)].end())
            return prob_order(n - 1, shorter, token);
        double total = double(total_it->second);
        auto c_it = counts_[std::size_t(n - 1)].find(ngram_key);
        double c = c_it == counts_[std::size_t(n - 1)].end() ? 0.0 : double(c_it->second);
        auto f_it = distinct_follow_[std::size_t(n - 1)].find(ctx_key);
        double follows = f_it == distinct_follow_[std::size_t(n - 1)].end()
                             ? 0.0
                             : double(f_it->second);
        return std::max(c - d, 0.0) / total +
               d * follows / total * prob_order(n - 1, shorter, token);
    }

    // Middle orders run on continuation counts.
    auto total_it = context_cont_total_[std::size_t(n - 1)].find(ctx_key);
    if (total_it == context_cont_total_[std::size_t(n - 1)].end() || total_it->second == 0)
        return prob_order(n - 1, shorter, token);
    double total = double(total_it->second);
    auto cc_it = continuation_[std::size_t(n - 1)].find(ngram_key);
    double cc = cc_it == continuation_[std::size_t(n - 1)].end() ? 0.0 : double(cc_it->second);
    // Distinct continuations of this context among continuation-counted grams.
    double follows = 0;
    {
        auto& cont = continuation_[std::size_t(n - 1)];
        for (auto it = cont.lower_bound(ctx_key + kSep);
             it != cont.end() && it->first.rfind(ctx_key + kSep, 0) == 0; ++it)
            follows += 1;
    }
    return std::max(cc - d, 0.0) / total +
           d * follows / total * prob_order(n - 1, shorter, token);
}

double KneserNeyModel::prob(const std::vector<std::string>& context,
                            const std::string& token) const {
    int usable = std::min<int>(order_ - 1, int(context.size()));
    return prob_order(usable + 1, context, token);
}

double KneserNeyModel::perplexity(const std::vector<std::string>& tokens) const {
    if (tokens.empty()) throw Error("perplexity of empty token stream");
    long double log_sum = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::size_t ctx_len = std::min<std::size_t>(std::size_t(order_ - 1), i);
        std::vector<std::string> ctx(tokens.begin() + std::ptrdiff_t(i - ctx_len),
                                     tokens.begin() + std::ptrdiff_t(i));
        double p = prob(ctx, tokens[i]);
        log_sum += std::log((long double)p);
    }
    return double(std::exp(-log_sum / (long double)tokens.size()));
}

std::string KneserNeyModel::serialize() const {
    std::ostringstream out;
    out << "#order " << order_ << "\n";
    out << "#tokens " << token_total_ << "\n";
    for (int n = 1; n <= order_; ++n)
        out << "#discount " << n << " " << discounts_[std::size_t(n - 1)] << "\n";
    for (int n = 1; n <= order_; ++n) {
        const auto& counts = counts_[std::size_t(n - 1)];
        const auto& cont = continuation_[std::size_t(n - 1)];
        for (const auto& [ngram, c] : counts) {
            std::string readable = ngram;
            std::replace(readable.begin(), readable.end(), kSep, ' ');
            auto cc_it = cont.find(ngram);
            out << n << "\t" << readable << "\t" << c << "\t"
                << (cc_it == cont.end() ? 0 : cc_it->second) << "\n";
        }
    }
    return out.str();
}

KneserNeyModel KneserNeyModel::parse(const std::string& text) {
    // Rebuilding aggregates from the gram lines keeps the format minimal.
    std::istringstream in(text);
    std::string line;
    KneserNeyModel m;
    std::vector<std::pair<int, std::string>> grams;  // for aggregates
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream h(line);
            std::string tag;
            h >> tag;
            if (tag == "#order") {
                h >> m.order_;
                m.counts_.resize(std::size_t(m.order_));
                m.continuation_.resize(std::size_t(m.order_));
                m.context_total_.resize(std::size_t(m.order_));
                m.context_cont_total_.resize(std::size_t(m.order_));
                m.distinct_follow_.resize(std::size_t(m.order_));
                m.discounts_.resize(std::size_t(m.order_), 0.5);
            } else if (tag == "#discount") {
                int n;
                double d;
                h >> n >> d;
                if (n >= 1 && n <= m.order_) m.discounts_[std::size_t(n - 1)] = d;
            } else if (tag == "#tokens") {
                h >> m.token_total_;
            }
            continue;
        }
        auto t1 = line.find('\t');
        auto t2 = line.rfind('\t');
        auto t_mid = line.rfind('\t', t2 - 1);
        if (t1 == std::string::npos || t2 == t1 || t_mid == t1) {
            if (t_mid == std::string::npos) continue;
        }
        int n = std::stoi(line.substr(0, t1));
        std::string ngram = line.substr(t1 + 1, t_mid - t1 - 1);
        std::uint64_t c = std::stoull(line.substr(t_mid + 1, t2 - t_mid - 1));
        std::uint64_t cc = std::stoull(line.substr(t2 + 1));
        std::replace(ngram.begin(), ngram.end(), ' ', kSep);
        if (n < 1 || n > m.order_) continue;
        m.counts_[std::size_t(n - 1)][ngram] = c;
        if (cc > 0) m.continuation_[std::size_t(n - 1)][ngram] = cc;
        grams.emplace_back(n, ngram);
    }
    // Vocabulary and aggregates.
    for (const auto& [ngram, _] : m.counts_[0]) m.vocabulary_.insert(ngram);
    for (int n = 2; n <= m.order_; ++n) {
        for (const auto& [ngram, c] : m.counts_[std::size_t(n - 1)]) {
            auto cut = ngram.rfind(kSep);
            std::string ctx = ngram.substr(0, cut);
            m.context_total_[std::size_t(n - 1)][ctx] += c;
            m.distinct_follow_[std::size_t(n - 1)][ctx] += 1;
        }
        for (const auto& [ngram, cc] : m.continuation_[std::size_t(n - 1)]) {
            auto cut = ngram.rfind(kSep);
            if (cut == std::string::npos) continue;
            m.context_cont_total_[std::size_t(n - 1)][ngram.substr(0, cut)] += cc;
        }
    }
    for (const auto& [_, cc] : m.continuation_[0]) m.unigram_cont_total_ += cc;
    return m;
}

}  // namespace dh::quality
