#include "scene3d/eval_grounding.hpp"

#include <map>
#include <stdexcept>

#include "scene3d/iou.hpp"
#include "scene3d/parallel.hpp"

namespace scene3d::eval {

OrientedBox3D lift_prediction_to_world(const proto::GroundingResponse& resp,
                                       const std::vector<Pose>& frame_poses) {
    if (resp.frame < 0 || static_cast<size_t>(resp.frame) >= frame_poses.size())
        throw std::invalid_argument("lift_prediction_to_world: frame index out of range");
    return transform_box(resp.box, frame_poses[static_cast<size_t>(resp.frame)]);
}

size_t refine_index(const OrientedBox3D& pred_world,
                    const std::vector<OrientedBox3D>& proposals_world) {
    if (proposals_world.empty())
        throw std::invalid_argument("refine_with_proposals: empty proposal list");
    size_t best = 0;
    double best_iou = -1.0;
    for (size_t i = 0; i < proposals_world.size(); ++i) {
        const double iou = iou_3d(pred_world, proposals_world[i]);
        if (iou > best_iou) {
            best_iou = iou;
            best = i;
        }
    }
    return best;
}

OrientedBox3D refine_with_proposals(const OrientedBox3D& pred_world,
                                    const std::vector<OrientedBox3D>& proposals_world) {
    return proposals_world[refine_index(pred_world, proposals_world)];
}

GroundingReport score_grounding(const std::vector<GroundingSample>& samples,
                                const std::vector<GroundingPrediction>& predictions,
                                const std::vector<double>& thresholds, bool refine, int jobs) {
    std::map<std::string, const GroundingPrediction*> by_id;
    for (const auto& p : predictions) by_id.emplace(p.id, &p);

    GroundingReport report;
    report.thresholds = thresholds;
    report.refine = refine;
    report.samples.resize(samples.size());

    parallel_for(samples.size(), jobs, [&](size_t idx) {
        const GroundingSample& sample = samples[idx];
        GroundingSampleScore& score = report.samples[idx];
        score.id = sample.id;

        const auto it = by_id.find(sample.id);
        if (it == by_id.end()) {
            score.note = "no prediction";
            return;
        }
        auto resp = proto::parse_grounding_response(it->second->raw_text);
        if (!resp) {
            score.note = "parse error: " + resp.error();
            return;
        }
        score.parsed = true;
        if (static_cast<size_t>(resp.value().frame) >= sample.frame_poses.size()) {
            score.note = "frame index out of range";  // scored as a miss
            return;
        }
        const OrientedBox3D pred_world =
            lift_prediction_to_world(resp.value(), sample.frame_poses);
        score.iou_raw = iou_3d(pred_world, sample.gt_box_world);
        score.iou_refined = score.iou_raw;
        if (!sample.proposals_world.empty()) {
            const OrientedBox3D refined =
                refine_with_proposals(pred_world, sample.proposals_world);
            score.iou_refined = iou_3d(refined, sample.gt_box_world);
        }
    });
    for (const auto& sample : samples)
        report.any_proposals = report.any_proposals || !sample.proposals_world.empty();

    const double n = samples.empty() ? 1.0 : static_cast<double>(samples.size());
    for (double t : thresholds) {
        int hits_raw = 0, hits_refined = 0;
        for (const auto& s : report.samples) {
            if (s.iou_raw >= t) ++hits_raw;
            if (s.iou_refined >= t) ++hits_refined;
        }
        report.acc_raw.push_back(samples.empty() ? 0.0 : hits_raw / n);
        report.acc_refined.push_back(samples.empty() ? 0.0 : hits_refined / n);
    }
    return report;
}

}  // namespace scene3d::eval
