#include "scene3d/eval_captioning.hpp"

#include "scene3d/iou.hpp"
#include "scene3d/parallel.hpp"

namespace scene3d::eval {

CaptionReport iou_gated_scores(const std::vector<CaptionSample>& samples, double gate, int jobs) {
    CaptionReport report;
    report.gate = gate;
    report.samples.resize(samples.size());
    if (samples.empty()) return report;

    std::vector<TokenList> candidates(samples.size());
    std::vector<std::vector<TokenList>> references(samples.size());
    parallel_for(samples.size(), jobs, [&](size_t i) {
        candidates[i] = tokenize(samples[i].candidate);
        references[i].reserve(samples[i].references.size());
        for (const auto& ref : samples[i].references) references[i].push_back(tokenize(ref));
    });

    // Corpus-wide IDF pre-pass, then independent per-sample scoring.
    const std::vector<double> cider = cider_d(candidates, references);

    parallel_for(samples.size(), jobs, [&](size_t i) {
        CaptionSampleScore& s = report.samples[i];
        s.id = samples[i].id;
        s.iou = iou_3d(samples[i].proposal_box, samples[i].gt_box);
        s.gated_out = s.iou < gate;
        if (s.gated_out) return;
        s.cider = cider[i];
        s.bleu4 = bleu4(candidates[i], references[i]);
        s.rouge_l = rouge_l(candidates[i], references[i]);
    });

    const double n = static_cast<double>(samples.size());
    for (const auto& s : report.samples) {
        report.cider_mean += s.cider / n;
        report.bleu4_mean += s.bleu4 / n;
        report.rouge_l_mean += s.rouge_l / n;
    }
    return report;
}

}  // namespace scene3d::eval
