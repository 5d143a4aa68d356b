#include "scene3d/captions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace scene3d::eval {

TokenList tokenize(std::string_view text) {
    TokenList tokens;
    std::string current;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

namespace {

// n-grams keyed by their joined-token spelling; '\x1f' cannot occur inside
// a token so the key is unambiguous.
using NgramCounts = std::unordered_map<std::string, long>;

NgramCounts count_ngrams(const TokenList& tokens, int n) {
    NgramCounts counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (size_t i = 0; i + static_cast<size_t>(n) <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (int k = 1; k < n; ++k) {
            key.push_back('\x1f');
            key += tokens[i + static_cast<size_t>(k)];
        }
        ++counts[key];
    }
    return counts;
}

struct TfIdfVector {
    std::vector<std::unordered_map<std::string, double>> per_n;
    std::vector<double> norm;
    long bigram_length = 0;  // the CIDEr-D length proxy
};

}  // namespace

std::vector<double> cider_d(const std::vector<TokenList>& candidates,
                            const std::vector<std::vector<TokenList>>& references,
                            const CiderOptions& options) {
    if (candidates.size() != references.size())
        throw std::invalid_argument("cider_d: candidates/references size mismatch");
    if (candidates.empty()) throw std::invalid_argument("cider_d: empty corpus");
    const int n_max = options.n_max;

    // Document frequency: how many samples have the n-gram anywhere in their
    // reference set.
    std::unordered_map<std::string, long> document_frequency;
    for (const auto& refs : references) {
        std::unordered_map<std::string, bool> seen;
        for (const auto& ref : refs)
            for (int n = 1; n <= n_max; ++n)
                for (const auto& [key, cnt] : count_ngrams(ref, n)) seen.emplace(key, true);
        for (const auto& [key, _] : seen) ++document_frequency[key];
    }
    const double log_corpus = std::log(static_cast<double>(references.size()));

    auto vectorize = [&](const TokenList& tokens) {
        TfIdfVector v;
        v.per_n.resize(static_cast<size_t>(n_max));
        v.norm.assign(static_cast<size_t>(n_max), 0.0);
        for (int n = 1; n <= n_max; ++n) {
            for (const auto& [key, cnt] : count_ngrams(tokens, n)) {
                double df = 0.0;
                if (auto it = document_frequency.find(key); it != document_frequency.end())
                    df = std::log(std::max(1.0, static_cast<double>(it->second)));
                const double w = static_cast<double>(cnt) * (log_corpus - df);
                v.per_n[static_cast<size_t>(n - 1)][key] = w;
                v.norm[static_cast<size_t>(n - 1)] += w * w;
                if (n == 2) v.bigram_length += cnt;
            }
            v.norm[static_cast<size_t>(n - 1)] =
                std::sqrt(v.norm[static_cast<size_t>(n - 1)]);
        }
        return v;
    };

    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (size_t s = 0; s < candidates.size(); ++s) {
        const TfIdfVector cand = vectorize(candidates[s]);
        std::vector<double> per_n(static_cast<size_t>(n_max), 0.0);
        for (const auto& ref_tokens : references[s]) {
            const TfIdfVector ref = vectorize(ref_tokens);
            const double delta = static_cast<double>(cand.bigram_length - ref.bigram_length);
            const double length_penalty =
                std::exp(-(delta * delta) / (2.0 * options.sigma * options.sigma));
            for (int n = 0; n < n_max; ++n) {
                double val = 0.0;
                for (const auto& [key, wc] : cand.per_n[static_cast<size_t>(n)]) {
                    auto it = ref.per_n[static_cast<size_t>(n)].find(key);
                    if (it == ref.per_n[static_cast<size_t>(n)].end()) continue;
                    val += std::min(wc, it->second) * it->second;  // count clipping
                }
                const double denom =
                    cand.norm[static_cast<size_t>(n)] * ref.norm[static_cast<size_t>(n)];
                if (denom != 0.0) val /= denom;
                per_n[static_cast<size_t>(n)] += val * length_penalty;
            }
        }
        double score = 0.0;
        for (double v : per_n) score += v;
        score /= static_cast<double>(n_max);
        if (!references[s].empty()) score /= static_cast<double>(references[s].size());
        scores.push_back(score * 10.0);
    }
    return scores;
}

double bleu4(const TokenList& candidate, const std::vector<TokenList>& references) {
    constexpr int kN = 4;
    if (candidate.empty() || references.empty()) return 0.0;

    const auto clen = static_cast<long>(candidate.size());
    long ref_len = -1;
    for (const auto& ref : references) {
        const auto rlen = static_cast<long>(ref.size());
        if (ref_len < 0 || std::abs(rlen - clen) < std::abs(ref_len - clen) ||
            (std::abs(rlen - clen) == std::abs(ref_len - clen) && rlen < ref_len))
            ref_len = rlen;
    }

    double log_precision_sum = 0.0;
    for (int n = 1; n <= kN; ++n) {
        const NgramCounts cand_counts = count_ngrams(candidate, n);
        const long total = std::max<long>(0, clen - n + 1);
        if (total == 0) return 0.0;
        NgramCounts max_ref;
        for (const auto& ref : references)
            for (const auto& [key, cnt] : count_ngrams(ref, n))
                max_ref[key] = std::max(max_ref[key], cnt);
        long clipped = 0;
        for (const auto& [key, cnt] : cand_counts) {
            auto it = max_ref.find(key);
            if (it != max_ref.end()) clipped += std::min(cnt, it->second);
        }
        if (clipped == 0) return 0.0;  // no smoothing
        log_precision_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
    }
    const double brevity =
        clen < ref_len ? std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(clen))
                       : 1.0;
    return brevity * std::exp(log_precision_sum / kN);
}

namespace {

long lcs_length(const TokenList& a, const TokenList& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<long> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

double rouge_l(const TokenList& candidate, const std::vector<TokenList>& references) {
    constexpr double kBeta = 1.2;
    if (candidate.empty() || references.empty()) return 0.0;
    double best_p = 0.0, best_r = 0.0;
    for (const auto& ref : references) {
        if (ref.empty()) continue;
        const double lcs = static_cast<double>(lcs_length(candidate, ref));
        best_p = std::max(best_p, lcs / static_cast<double>(candidate.size()));
        best_r = std::max(best_r, lcs / static_cast<double>(ref.size()));
    }
    if (best_p == 0.0 || best_r == 0.0) return 0.0;
    return (1.0 + kBeta * kBeta) * best_p * best_r / (best_r + kBeta * kBeta * best_p);
}

}  // namespace scene3d::eval
