#pragma once

#include <string>
#include <vector>

#include "scene3d/geometry.hpp"
#include "scene3d/pose.hpp"
#include "scene3d/protocol.hpp"

namespace scene3d::eval {

// One grounding evaluation unit: ground truth is an axis-aligned box already
// extended with zero angles, plus the per-frame extrinsics needed to lift a
// frame-local prediction into world coordinates.
struct GroundingSample {
    std::string id;
    std::string query;
    OrientedBox3D gt_box_world;          // angles must be (0, 0, 0)
    std::vector<Pose> frame_poses;       // world_from_camera per sampled frame
    std::vector<OrientedBox3D> proposals_world;  // optional
};

struct GroundingPrediction {
    std::string id;
    std::string raw_text;
};

OrientedBox3D lift_prediction_to_world(const proto::GroundingResponse& resp,
                                       const std::vector<Pose>& frame_poses);

// Argmax-IoU proposal, ties to the lowest index. Throws on an empty list.
OrientedBox3D refine_with_proposals(const OrientedBox3D& pred_world,
                                    const std::vector<OrientedBox3D>& proposals_world);
size_t refine_index(const OrientedBox3D& pred_world,
                    const std::vector<OrientedBox3D>& proposals_world);

struct GroundingSampleScore {
    std::string id;
    bool parsed = false;
    double iou_raw = 0.0;      // without proposal refinement
    double iou_refined = 0.0;  // equals iou_raw when the sample has no proposals
    std::string note;          // parse failure / out-of-range diagnostics
};

struct GroundingReport {
    std::vector<double> thresholds;
    std::vector<double> acc_raw;      // per threshold
    std::vector<double> acc_refined;  // per threshold; meaningful when any_proposals
    bool any_proposals = false;
    bool refine = false;
    std::vector<GroundingSampleScore> samples;
};

// Pairs predictions to samples by id; missing or unparseable predictions and
// out-of-range frame indices score as misses. Reports accuracies at every
// threshold, both with and without refinement when proposals exist.
// Per-sample scoring runs on `jobs` threads; the report does not depend on
// the thread count.
GroundingReport score_grounding(const std::vector<GroundingSample>& samples,
                                const std::vector<GroundingPrediction>& predictions,
                                const std::vector<double>& thresholds = {0.25, 0.5},
                                bool refine = true, int jobs = 1);

}  // namespace scene3d::eval
