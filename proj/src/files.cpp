#include "scene3d/files.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace scene3d::io {

using nlohmann::json;

namespace {

Expected<json> parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Unexpected("cannot open " + path);
    json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) return Unexpected("malformed JSON in " + path);
    return doc;
}

Expected<OrientedBox3D> box_from_numbers(const json& arr, const std::string& what,
                                         bool allow_axis_aligned) {
    if (!arr.is_array()) return Unexpected(what + " is not an array");
    const size_t n = arr.size();
    if (n != 9 && !(allow_axis_aligned && n == 6))
        return Unexpected(what + " has " + std::to_string(n) + " numbers");
    double v[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
    for (size_t i = 0; i < n; ++i) {
        if (!arr[i].is_number()) return Unexpected(what + " element is not a number");
        v[i] = arr[i].get<double>();
        if (!std::isfinite(v[i])) return Unexpected(what + " element is not finite");
    }
    if (v[3] < 0 || v[4] < 0 || v[5] < 0) return Unexpected(what + " has a negative size");
    return OrientedBox3D{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}};
}

Expected<Pose> pose_from_matrix(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.size() != 16)
        return Unexpected(what + " must hold 16 numbers (row-major 4x4)");
    double v[16];
    for (size_t i = 0; i < 16; ++i) {
        if (!arr[i].is_number()) return Unexpected(what + " element is not a number");
        v[i] = arr[i].get<double>();
        if (!std::isfinite(v[i])) return Unexpected(what + " element is not finite");
    }
    Pose pose;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) pose.rotation.m[r][c] = v[r * 4 + c];
    pose.translation = {v[3], v[7], v[11]};

    const double err = orthonormality_error(pose.rotation);
    if (err > 1e-4 || pose.rotation.det() <= 0.0)
        return Unexpected(what + " rotation is not orthonormal (error " + std::to_string(err) +
                          ")");
    if (err > 1e-9) pose.rotation = nearest_rotation(pose.rotation);
    return pose;
}

}  // namespace

Expected<std::vector<eval::GroundingPrediction>> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Unexpected("cannot open " + path);
    std::vector<eval::GroundingPrediction> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (doc.is_discarded() || !doc.is_object())
            return Unexpected(path + ":" + std::to_string(lineno) + ": malformed record");
        auto id = doc.find("id");
        auto response = doc.find("response");
        if (id == doc.end() || !id->is_string() || response == doc.end() ||
            !response->is_string())
            return Unexpected(path + ":" + std::to_string(lineno) +
                              ": record needs string \"id\" and \"response\"");
        out.push_back({id->get<std::string>(), response->get<std::string>()});
    }
    return out;
}

Expected<std::vector<eval::GroundingSample>> load_grounding_gt(const std::string& path) {
    auto doc = parse_file(path);
    if (!doc) return Unexpected(doc.error());
    const json& root = doc.value();
    if (!root.is_object() || !root.contains("samples") || !root["samples"].is_array())
        return Unexpected(path + ": expected an object with a \"samples\" list");

    std::vector<eval::GroundingSample> out;
    for (const json& rec : root["samples"]) {
        eval::GroundingSample sample;
        if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
            return Unexpected(path + ": sample without string \"id\"");
        sample.id = rec["id"].get<std::string>();
        if (rec.contains("query") && rec["query"].is_string())
            sample.query = rec["query"].get<std::string>();

        if (!rec.contains("gt_box"))
            return Unexpected(path + ": sample " + sample.id + " missing gt_box");
        auto gt = box_from_numbers(rec["gt_box"], "gt_box of " + sample.id,
                                   /*allow_axis_aligned=*/true);
        if (!gt) return Unexpected(path + ": " + gt.error());
        sample.gt_box_world = gt.value();
        if (sample.gt_box_world.angles.x != 0.0 || sample.gt_box_world.angles.y != 0.0 ||
            sample.gt_box_world.angles.z != 0.0)
            return Unexpected(path + ": gt_box of " + sample.id +
                              " must carry zero angles (axis-aligned GT)");

        if (!rec.contains("frame_poses") || !rec["frame_poses"].is_array() ||
            rec["frame_poses"].empty())
            return Unexpected(path + ": sample " + sample.id + " needs non-empty frame_poses");
        for (const json& mat : rec["frame_poses"]) {
            auto pose = pose_from_matrix(mat, "frame pose of " + sample.id);
            if (!pose) return Unexpected(path + ": " + pose.error());
            sample.frame_poses.push_back(pose.value());
        }
        if (rec.contains("proposals")) {
            if (!rec["proposals"].is_array())
                return Unexpected(path + ": proposals of " + sample.id + " must be a list");
            for (const json& p : rec["proposals"]) {
                auto box = box_from_numbers(p, "proposal of " + sample.id, false);
                if (!box) return Unexpected(path + ": " + box.error());
                sample.proposals_world.push_back(box.value());
            }
        }
        out.push_back(std::move(sample));
    }
    return out;
}

Expected<DetectionGtBundle> load_detection_gt(const std::string& path) {
    auto doc = parse_file(path);
    if (!doc) return Unexpected(doc.error());
    const json& root = doc.value();
    if (!root.is_object() || !root.contains("class_list") || !root["class_list"].is_array() ||
        !root.contains("scenes") || !root["scenes"].is_array())
        return Unexpected(path + ": expected {\"class_list\": [...], \"scenes\": [...]}");

    DetectionGtBundle bundle;
    for (const json& c : root["class_list"]) {
        if (!c.is_string()) return Unexpected(path + ": class_list entries must be strings");
        bundle.class_list.push_back(c.get<std::string>());
    }
    if (bundle.class_list.empty()) return Unexpected(path + ": class_list is empty");

    for (const json& rec : root["scenes"]) {
        eval::DetectionGroundTruth scene;
        if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
            return Unexpected(path + ": scene without string \"id\"");
        scene.scene_id = rec["id"].get<std::string>();
        if (!rec.contains("boxes") || !rec["boxes"].is_array())
            return Unexpected(path + ": scene " + scene.scene_id + " needs a \"boxes\" list");
        for (const json& b : rec["boxes"]) {
            if (!b.is_object() || !b.contains("label") || !b["label"].is_string() ||
                !b.contains("box"))
                return Unexpected(path + ": scene " + scene.scene_id +
                                  " box entries need \"label\" and \"box\"");
            auto box = box_from_numbers(b["box"], "box in scene " + scene.scene_id, false);
            if (!box) return Unexpected(path + ": " + box.error());
            scene.boxes.emplace_back(b["label"].get<std::string>(), box.value());
        }
        bundle.scenes.push_back(std::move(scene));
    }
    return bundle;
}

Expected<std::vector<eval::CaptionSample>> load_caption_gt(const std::string& path) {
    auto doc = parse_file(path);
    if (!doc) return Unexpected(doc.error());
    const json& root = doc.value();
    if (!root.is_object() || !root.contains("samples") || !root["samples"].is_array())
        return Unexpected(path + ": expected an object with a \"samples\" list");

    std::vector<eval::CaptionSample> out;
    for (const json& rec : root["samples"]) {
        eval::CaptionSample sample;
        if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
            return Unexpected(path + ": sample without string \"id\"");
        sample.id = rec["id"].get<std::string>();
        if (!rec.contains("proposal_box") || !rec.contains("gt_box"))
            return Unexpected(path + ": sample " + sample.id +
                              " needs proposal_box and gt_box");
        auto prop = box_from_numbers(rec["proposal_box"], "proposal_box of " + sample.id, true);
        if (!prop) return Unexpected(path + ": " + prop.error());
        sample.proposal_box = prop.value();
        auto gt = box_from_numbers(rec["gt_box"], "gt_box of " + sample.id, true);
        if (!gt) return Unexpected(path + ": " + gt.error());
        sample.gt_box = gt.value();
        if (!rec.contains("references") || !rec["references"].is_array() ||
            rec["references"].empty())
            return Unexpected(path + ": sample " + sample.id + " needs non-empty references");
        for (const json& r : rec["references"]) {
            if (!r.is_string())
                return Unexpected(path + ": references of " + sample.id + " must be strings");
            sample.references.push_back(r.get<std::string>());
        }
        out.push_back(std::move(sample));
    }
    return out;
}

Expected<std::map<std::string, std::string>> load_alias_table(const std::string& path) {
    auto doc = parse_file(path);
    if (!doc) return Unexpected(doc.error());
    const json& root = doc.value();
    if (!root.is_object()) return Unexpected(path + ": alias table must be a JSON object");
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : root.items()) {
        if (!value.is_string()) return Unexpected(path + ": alias values must be strings");
        out[key] = value.get<std::string>();
    }
    return out;
}

Expected<std::map<std::string, std::vector<OrientedBox3D>>> load_proposals(
    const std::string& path) {
    auto doc = parse_file(path);
    if (!doc) return Unexpected(doc.error());
    const json& root = doc.value();
    if (!root.is_object() || !root.contains("samples") || !root["samples"].is_array())
        return Unexpected(path + ": expected an object with a \"samples\" list");
    std::map<std::string, std::vector<OrientedBox3D>> out;
    for (const json& rec : root["samples"]) {
        if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string() ||
            !rec.contains("proposals") || !rec["proposals"].is_array())
            return Unexpected(path + ": entries need \"id\" and a \"proposals\" list");
        auto& list = out[rec["id"].get<std::string>()];
        for (const json& p : rec["proposals"]) {
            auto box = box_from_numbers(p, "proposal", false);
            if (!box) return Unexpected(path + ": " + box.error());
            list.push_back(box.value());
        }
    }
    return out;
}

Expected<SceneBundle> load_scene_bundle(const std::string& dir) {
    SceneBundle bundle;

    std::ifstream frames(dir + "/frames.txt");
    if (!frames) return Unexpected("cannot open " + dir + "/frames.txt");
    std::string line;
    std::vector<std::string> frame_paths;
    while (std::getline(frames, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        std::string p;
        double t;
        if (!(ss >> p >> t)) return Unexpected(dir + "/frames.txt: expected \"path timestamp\"");
        frame_paths.push_back(p);
        bundle.stream.timestamps.push_back(t);
    }
    const size_t n = frame_paths.size();
    if (n == 0) return Unexpected(dir + "/frames.txt lists no frames");
    for (size_t i = 1; i < n; ++i)
        if (bundle.stream.timestamps[i] <= bundle.stream.timestamps[i - 1])
            return Unexpected(dir + "/frames.txt: timestamps must be strictly increasing");

    bundle.stream.frames.resize(n);

    std::ifstream poses(dir + "/poses.txt");
    if (!poses) return Unexpected("cannot open " + dir + "/poses.txt");
    for (size_t i = 0; i < n; ++i) {
        json arr = json::array();
        for (int k = 0; k < 16; ++k) {
            double v;
            if (!(poses >> v))
                return Unexpected(dir + "/poses.txt: expected 16 numbers for frame " +
                                  std::to_string(i));
            arr.push_back(v);
        }
        auto pose = pose_from_matrix(arr, "pose of frame " + std::to_string(i));
        if (!pose) return Unexpected(dir + "/poses.txt: " + pose.error());
        bundle.stream.frames[i].world_from_camera = pose.value();
    }

    std::ifstream intr(dir + "/intrinsics.txt");
    if (!intr) return Unexpected("cannot open " + dir + "/intrinsics.txt");
    for (size_t i = 0; i < n; ++i) {
        auto& f = bundle.stream.frames[i];
        if (!(intr >> f.intrinsics.fx >> f.intrinsics.fy >> f.intrinsics.cx >> f.intrinsics.cy >>
              f.width >> f.height))
            return Unexpected(dir + "/intrinsics.txt: expected \"fx fy cx cy width height\" for frame " +
                              std::to_string(i));
    }

    std::ifstream anns(dir + "/annotations.txt");
    if (!anns) return Unexpected("cannot open " + dir + "/annotations.txt");
    while (std::getline(anns, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        std::string instance, category;
        double v[9];
        if (!(ss >> instance >> category >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5] >>
              v[6] >> v[7] >> v[8]))
            return Unexpected(dir +
                              "/annotations.txt: expected \"instance category x y z w h d yaw "
                              "pitch roll frames...\"");
        if (v[3] < 0 || v[4] < 0 || v[5] < 0)
            return Unexpected(dir + "/annotations.txt: negative box size for " + instance);
        OrientedBox3D box{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}};
        int frame;
        bool any = false;
        while (ss >> frame) {
            any = true;
            if (frame < 0 || static_cast<size_t>(frame) >= n)
                return Unexpected(dir + "/annotations.txt: frame " + std::to_string(frame) +
                                  " out of range for " + instance);
            bundle.annotations.push_back({frame, instance, category, box});
        }
        if (!any)
            return Unexpected(dir + "/annotations.txt: " + instance +
                              " lists no visible frames");
    }
    return bundle;
}

}  // namespace scene3d::io
