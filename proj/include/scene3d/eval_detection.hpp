#pragma once

#include <map>
#include <string>
#include <vector>

#include "scene3d/geometry.hpp"
#include "scene3d/protocol.hpp"

namespace scene3d::eval {

struct DetectionGroundTruth {
    std::string scene_id;
    std::vector<std::pair<std::string, OrientedBox3D>> boxes;  // (category, box), frame-0 coords
};

// Lowercase, trim, collapse internal whitespace, then apply the alias table.
class CategoryNormalizer {
public:
    CategoryNormalizer() = default;
    explicit CategoryNormalizer(std::map<std::string, std::string> aliases)
        : aliases_(std::move(aliases)) {}
    std::string operator()(std::string_view raw) const;

private:
    std::map<std::string, std::string> aliases_;
};

struct CategoryCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

struct Pairing {
    int pred_index;
    int gt_index;
    double iou;
};

struct MatchingResult {
    std::map<std::string, CategoryCounts> per_category;
    std::vector<Pairing> pairings;
};

// Greedy matching in prediction-emission order: each prediction takes the
// unused same-category ground truth with the highest IoU when that IoU
// reaches the threshold; matched ground truths are marked used. Unmatched
// predictions are FPs, unmatched ground truths FNs.
MatchingResult greedy_match(const std::vector<proto::DetectionItem>& preds,
                            const DetectionGroundTruth& gt, double iou_threshold,
                            const CategoryNormalizer& normalize = {});

void accumulate(MatchingResult& total, const MatchingResult& scene);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2PR/(P+R); 0 where a denominator is 0.
Prf prf_from_counts(const CategoryCounts& c);
std::map<std::string, Prf> per_class_prf(const MatchingResult& match);

struct MacroScores {
    double ap = 0.0;
    double ar = 0.0;
    double f1 = 0.0;
    int classes_counted = 0;  // class-list entries present in GT or predictions
};

// Unweighted mean over class_list entries that appear in the aggregated
// counts; classes absent from both GT and predictions are skipped.
MacroScores macro_average(const MatchingResult& total, const std::vector<std::string>& class_list,
                          const CategoryNormalizer& normalize = {});

}  // namespace scene3d::eval
