#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scene3d::eval {

using TokenList = std::vector<std::string>;

// Lowercase, punctuation to spaces, split on whitespace. Bytes outside
// [a-z0-9] count as punctuation.
TokenList tokenize(std::string_view text);

struct CiderOptions {
    int n_max = 4;
    double sigma = 6.0;  // length-penalty gaussian width
};

// CIDEr-D over the whole corpus: TF-IDF n-gram cosine per n in 1..n_max with
// reference count clipping and the length gaussian, averaged over n and
// references, scaled by 10. IDF comes from the reference sets of all
// candidates, so scores are corpus-dependent by construction.
std::vector<double> cider_d(const std::vector<TokenList>& candidates,
                            const std::vector<std::vector<TokenList>>& references,
                            const CiderOptions& options = {});

// Sentence BLEU-4 without smoothing: geometric mean of clipped n-gram
// precisions (zero if any precision is zero) times the brevity penalty
// against the closest reference length (ties to the shorter).
double bleu4(const TokenList& candidate, const std::vector<TokenList>& references);

// LCS F-measure with beta = 1.2; precision and recall are each maximized
// over the references before combining.
double rouge_l(const TokenList& candidate, const std::vector<TokenList>& references);

}  // namespace scene3d::eval
