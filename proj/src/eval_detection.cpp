#include "scene3d/eval_detection.hpp"

#include <cctype>
#include <stdexcept>

#include "scene3d/iou.hpp"

namespace scene3d::eval {

std::string CategoryNormalizer::operator()(std::string_view raw) const {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    if (auto it = aliases_.find(out); it != aliases_.end()) return it->second;
    return out;
}

MatchingResult greedy_match(const std::vector<proto::DetectionItem>& preds,
                            const DetectionGroundTruth& gt, double iou_threshold,
                            const CategoryNormalizer& normalize) {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0))
        throw std::invalid_argument("greedy_match: threshold must be in (0, 1]");

    MatchingResult result;
    std::vector<std::string> gt_cat(gt.boxes.size());
    std::vector<bool> used(gt.boxes.size(), false);
    for (size_t g = 0; g < gt.boxes.size(); ++g) gt_cat[g] = normalize(gt.boxes[g].first);

    for (size_t p = 0; p < preds.size(); ++p) {
        const std::string cat = normalize(preds[p].label);
        auto& counts = result.per_category[cat];
        int best_gt = -1;
        double best_iou = 0.0;
        for (size_t g = 0; g < gt.boxes.size(); ++g) {
            if (used[g] || gt_cat[g] != cat) continue;
            const double iou = iou_3d(preds[p].box, gt.boxes[g].second);
            if (iou >= iou_threshold && iou > best_iou) {
                best_iou = iou;
                best_gt = static_cast<int>(g);
            }
        }
        if (best_gt >= 0) {
            used[static_cast<size_t>(best_gt)] = true;
            ++counts.tp;
            result.pairings.push_back({static_cast<int>(p), best_gt, best_iou});
        } else {
            ++counts.fp;
        }
    }
    for (size_t g = 0; g < gt.boxes.size(); ++g)
        if (!used[g]) ++result.per_category[gt_cat[g]].fn;
    return result;
}

void accumulate(MatchingResult& total, const MatchingResult& scene) {
    for (const auto& [cat, counts] : scene.per_category) {
        auto& t = total.per_category[cat];
        t.tp += counts.tp;
        t.fp += counts.fp;
        t.fn += counts.fn;
    }
}

Prf prf_from_counts(const CategoryCounts& c) {
    Prf out;
    if (c.tp + c.fp > 0) out.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (out.precision + out.recall > 0)
        out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

std::map<std::string, Prf> per_class_prf(const MatchingResult& match) {
    std::map<std::string, Prf> out;
    for (const auto& [cat, counts] : match.per_category) out[cat] = prf_from_counts(counts);
    return out;
}

MacroScores macro_average(const MatchingResult& total, const std::vector<std::string>& class_list,
                          const CategoryNormalizer& normalize) {
    if (class_list.empty()) throw std::invalid_argument("macro_average: empty class list");
    MacroScores macro;
    for (const auto& raw : class_list) {
        const auto it = total.per_category.find(normalize(raw));
        if (it == total.per_category.end()) continue;  // absent from GT and predictions
        const Prf prf = prf_from_counts(it->second);
        macro.ap += prf.precision;
        macro.ar += prf.recall;
        macro.f1 += prf.f1;
        ++macro.classes_counted;
    }
    if (macro.classes_counted > 0) {
        macro.ap /= macro.classes_counted;
        macro.ar /= macro.classes_counted;
        macro.f1 /= macro.classes_counted;
    }
    return macro;
}

}  // namespace scene3d::eval
