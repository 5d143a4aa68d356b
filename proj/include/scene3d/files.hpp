#pragma once

#include <map>
#include <string>
#include <vector>

#include "scene3d/data_prep.hpp"
#include "scene3d/eval_captioning.hpp"
#include "scene3d/eval_detection.hpp"
#include "scene3d/eval_grounding.hpp"
#include "scene3d/expected.hpp"

namespace scene3d::io {

// Line-delimited prediction records: one JSON object per line with string
// fields "id" and "response". Blank lines are ignored.
Expected<std::vector<eval::GroundingPrediction>> load_predictions(const std::string& path);

// Grounding ground truth: {"samples": [{"id", "query", "gt_box" (6 or 9
// numbers; 9-number boxes must carry zero angles), "frame_poses" (list of
// row-major 4x4 world_from_camera), "proposals" (optional list of 9-number
// boxes)}]}. Rotations with orthonormality error in (1e-9, 1e-4] are
// re-orthonormalized; worse ones reject the file.
Expected<std::vector<eval::GroundingSample>> load_grounding_gt(const std::string& path);

struct DetectionGtBundle {
    std::vector<std::string> class_list;
    std::vector<eval::DetectionGroundTruth> scenes;
};

// {"class_list": [...], "scenes": [{"id", "boxes": [{"label", "box"}]}]}
Expected<DetectionGtBundle> load_detection_gt(const std::string& path);

// {"samples": [{"id", "proposal_box", "gt_box", "references": [...]}]}.
// Candidate texts are joined in from the predictions file by id.
Expected<std::vector<eval::CaptionSample>> load_caption_gt(const std::string& path);

// Flat JSON object mapping raw category spellings to canonical ones.
Expected<std::map<std::string, std::string>> load_alias_table(const std::string& path);

// Standalone proposal sets, {"samples": [{"id", "proposals": [[9 numbers]]}]}.
// Overrides any proposals embedded in the ground-truth bundle.
Expected<std::map<std::string, std::vector<OrientedBox3D>>> load_proposals(
    const std::string& path);

struct SceneBundle {
    prep::FrameStream stream;
    std::vector<prep::VisibleAnnotation> annotations;
};

// Per-scene directory with frames.txt (path timestamp), poses.txt (16
// numbers row-major 4x4 world_from_camera per frame), intrinsics.txt
// (fx fy cx cy width height per frame) and annotations.txt (instance id,
// category, 9-number box, visible frame indices).
Expected<SceneBundle> load_scene_bundle(const std::string& dir);

}  // namespace scene3d::io
