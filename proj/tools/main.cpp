#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "scene3d/data_prep.hpp"
#include "scene3d/eval_captioning.hpp"
#include "scene3d/eval_detection.hpp"
#include "scene3d/eval_grounding.hpp"
#include "scene3d/files.hpp"
#include "scene3d/fusion.hpp"
#include "scene3d/iou.hpp"
#include "scene3d/parallel.hpp"
#include "scene3d/rng.hpp"

using namespace scene3d;

namespace {

struct CommonOpts {
    std::string pred;
    std::string gt;
    std::string out;
    int jobs = 1;
    uint64_t seed = 0;
    bool strict = false;
};

int fail(const std::string& message) {
    std::cerr << "scene3d: " << message << "\n";
    return 1;
}

int emit(const cli::Report& report, const std::string& out_path, const std::string& human) {
    if (!report.write(out_path)) return fail("cannot write report to " + out_path);
    std::cout << human;
    return 0;
}

void echo_common(cli::Report& report, const std::string& task, const CommonOpts& opts) {
    report.kv("config.task", task);
    if (!opts.pred.empty()) report.kv("config.pred", opts.pred);
    if (!opts.gt.empty()) report.kv("config.gt", opts.gt);
    report.kv("config.seed", static_cast<long>(opts.seed));
    // --jobs is intentionally not echoed: reports must not depend on the
    // worker count.
}

// ---------------------------------------------------------------------------
// eval-grounding
// ---------------------------------------------------------------------------

int run_eval_grounding(const CommonOpts& opts, const std::string& proposals_path,
                       const std::vector<double>& thresholds, bool refine) {
    auto samples = io::load_grounding_gt(opts.gt);
    if (!samples) return fail(samples.error());
    auto predictions = io::load_predictions(opts.pred);
    if (!predictions) return fail(predictions.error());
    if (!proposals_path.empty()) {
        auto proposals = io::load_proposals(proposals_path);
        if (!proposals) return fail(proposals.error());
        for (auto& s : samples.value()) {
            if (auto it = proposals.value().find(s.id); it != proposals.value().end())
                s.proposals_world = it->second;
        }
    }

    const eval::GroundingReport result =
        eval::score_grounding(samples.value(), predictions.value(), thresholds, refine, opts.jobs);

    cli::Report report("eval-grounding");
    echo_common(report, "eval-grounding", opts);
    if (!proposals_path.empty()) report.kv("config.proposals", proposals_path);
    report.kv("config.refine", refine ? "on" : "off");
    {
        std::string joined;
        for (size_t i = 0; i < thresholds.size(); ++i)
            joined += (i ? "," : "") + cli::fmt4(thresholds[i]);
        report.kv("config.thresholds", joined);
    }

    const bool use_refined = refine && result.any_proposals;
    report.section("accuracy");
    report.kv("samples", static_cast<long>(result.samples.size()));
    for (size_t t = 0; t < thresholds.size(); ++t) {
        const std::string key = "acc@" + cli::fmt4(thresholds[t]);
        report.kv(key, use_refined ? result.acc_refined[t] : result.acc_raw[t]);
        if (result.any_proposals) report.kv("unrefined_" + key, result.acc_raw[t]);
    }
    report.section("per_sample");
    report.row({"id", "parsed", "iou", "iou_refined", "note"});
    for (const auto& s : result.samples)
        report.row({s.id, s.parsed ? "1" : "0", cli::fmt4(s.iou_raw), cli::fmt4(s.iou_refined),
                    s.note.empty() ? "-" : s.note});

    std::string human = "eval-grounding: " + std::to_string(result.samples.size()) + " samples\n";
    for (size_t t = 0; t < thresholds.size(); ++t) {
        human += "  Acc@" + cli::fmt4(thresholds[t]) + "  " +
                 cli::fmt4(use_refined ? result.acc_refined[t] : result.acc_raw[t]);
        if (result.any_proposals) human += " (" + cli::fmt4(result.acc_raw[t]) + " unrefined)";
        human += "\n";
    }
    return emit(report, opts.out, human);
}

// ---------------------------------------------------------------------------
// eval-detect
// ---------------------------------------------------------------------------

int run_eval_detect(const CommonOpts& opts, double iou_thresh, const std::string& alias_path) {
    auto bundle = io::load_detection_gt(opts.gt);
    if (!bundle) return fail(bundle.error());
    auto predictions = io::load_predictions(opts.pred);
    if (!predictions) return fail(predictions.error());

    eval::CategoryNormalizer normalize;
    if (!alias_path.empty()) {
        auto aliases = io::load_alias_table(alias_path);
        if (!aliases) return fail(aliases.error());
        normalize = eval::CategoryNormalizer(aliases.value());
    }

    std::map<std::string, const std::string*> responses;
    for (const auto& p : predictions.value()) responses[p.id] = &p.raw_text;

    const auto& scenes = bundle.value().scenes;
    const proto::ParseMode mode =
        opts.strict ? proto::ParseMode::strict : proto::ParseMode::lenient;

    std::vector<eval::MatchingResult> per_scene(scenes.size());
    std::vector<std::vector<std::string>> warnings(scenes.size());
    std::vector<std::string> hard_errors(scenes.size());
    parallel_for(scenes.size(), opts.jobs, [&](size_t i) {
        const auto& scene = scenes[i];
        std::vector<proto::DetectionItem> items;
        const auto it = responses.find(scene.scene_id);
        if (it == responses.end()) {
            warnings[i].push_back(scene.scene_id + ": no prediction record");
        } else {
            auto parsed = proto::parse_detection_response(*it->second, mode);
            if (!parsed) {
                if (mode == proto::ParseMode::strict) {
                    hard_errors[i] = scene.scene_id + ": " + parsed.error();
                    return;
                }
                warnings[i].push_back(scene.scene_id + ": " + parsed.error() +
                                      " (scored as empty)");
            } else {
                items = std::move(parsed.value().items);
                for (const auto& w : parsed.value().warnings)
                    warnings[i].push_back(scene.scene_id + ": " + w);
            }
        }
        per_scene[i] = eval::greedy_match(items, scene, iou_thresh, normalize);
    });
    for (const auto& err : hard_errors)
        if (!err.empty()) return fail("strict parse failure: " + err);

    eval::MatchingResult total;
    for (const auto& scene : per_scene) eval::accumulate(total, scene);
    const auto prf = eval::per_class_prf(total);
    const auto macro = eval::macro_average(total, bundle.value().class_list, normalize);

    cli::Report report("eval-detect");
    echo_common(report, "eval-detect", opts);
    report.kv("config.iou_thresh", iou_thresh);
    report.kv("config.parse_mode", opts.strict ? "strict" : "lenient");
    if (!alias_path.empty()) report.kv("config.aliases", alias_path);
    report.kv("config.classes", static_cast<long>(bundle.value().class_list.size()));

    report.section("per_class");
    report.row({"class", "tp", "fp", "fn", "precision", "recall", "f1"});
    for (const auto& [cls, counts] : total.per_category) {
        const eval::Prf& p = prf.at(cls);
        report.row({cls, std::to_string(counts.tp), std::to_string(counts.fp),
                    std::to_string(counts.fn), cli::fmt4(p.precision), cli::fmt4(p.recall),
                    cli::fmt4(p.f1)});
    }
    report.section("macro");
    report.kv("classes_counted", macro.classes_counted);
    report.kv("skip_absent_classes", "true");
    report.kv("ap", macro.ap);
    report.kv("ar", macro.ar);
    report.kv("f1", macro.f1);
    report.section("warnings");
    long warning_count = 0;
    for (const auto& list : warnings) warning_count += static_cast<long>(list.size());
    report.kv("count", warning_count);
    for (const auto& list : warnings)
        for (const auto& w : list) report.line(w);

    std::string human = "eval-detect: " + std::to_string(scenes.size()) + " scenes, threshold " +
                        cli::fmt4(iou_thresh) + "\n";
    human += "  class              tp   fp   fn   precision  recall     f1\n";
    for (const auto& [cls, counts] : total.per_category) {
        const eval::Prf& p = prf.at(cls);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "  %-16s %4ld %4ld %4ld      %s  %s  %s\n", cls.c_str(),
                      counts.tp, counts.fp, counts.fn, cli::fmt4(p.precision).c_str(),
                      cli::fmt4(p.recall).c_str(), cli::fmt4(p.f1).c_str());
        human += buf;
    }
    human += "  macro (" + std::to_string(macro.classes_counted) + " classes): AP " +
             cli::fmt4(macro.ap) + "  AR " + cli::fmt4(macro.ar) + "  F1 " + cli::fmt4(macro.f1) +
             "\n";
    return emit(report, opts.out, human);
}

// ---------------------------------------------------------------------------
// eval-caption
// ---------------------------------------------------------------------------

int run_eval_caption(const CommonOpts& opts, double gate) {
    auto samples = io::load_caption_gt(opts.gt);
    if (!samples) return fail(samples.error());
    auto predictions = io::load_predictions(opts.pred);
    if (!predictions) return fail(predictions.error());

    std::map<std::string, const std::string*> responses;
    for (const auto& p : predictions.value()) responses[p.id] = &p.raw_text;
    std::vector<std::string> missing;
    for (auto& s : samples.value()) {
        s.candidate.clear();
        const auto it = responses.find(s.id);
        if (it == responses.end()) {
            missing.push_back(s.id + ": no prediction record");
            continue;
        }
        auto caption = proto::parse_caption_response(*it->second);
        if (!caption) {
            missing.push_back(s.id + ": " + caption.error());
            continue;
        }
        s.candidate = std::move(caption.value().text);
    }

    const eval::CaptionReport result = eval::iou_gated_scores(samples.value(), gate, opts.jobs);

    cli::Report report("eval-caption");
    echo_common(report, "eval-caption", opts);
    report.kv("config.gate", gate);
    report.section("corpus");
    report.kv("samples", static_cast<long>(result.samples.size()));
    report.kv("cider", result.cider_mean);
    report.kv("bleu4", result.bleu4_mean);
    report.kv("rougel", result.rouge_l_mean);
    report.kv("meteor", "n/a");
    report.section("per_sample");
    report.row({"id", "iou", "gated_out", "cider", "bleu4", "rougel"});
    for (const auto& s : result.samples)
        report.row({s.id, cli::fmt4(s.iou), s.gated_out ? "1" : "0", cli::fmt4(s.cider),
                    cli::fmt4(s.bleu4), cli::fmt4(s.rouge_l)});
    report.section("warnings");
    report.kv("count", static_cast<long>(missing.size()));
    for (const auto& w : missing) report.line(w);

    std::string human = "eval-caption: " + std::to_string(result.samples.size()) +
                        " samples, gate " + cli::fmt4(gate) + "\n";
    human += "  C@gate " + cli::fmt4(result.cider_mean) + "  B-4@gate " +
             cli::fmt4(result.bleu4_mean) + "  M@gate n/a  R@gate " +
             cli::fmt4(result.rouge_l_mean) + "\n";
    return emit(report, opts.out, human);
}

// ---------------------------------------------------------------------------
// prep-frames
// ---------------------------------------------------------------------------

int run_prep_frames(const CommonOpts& opts, const std::string& scene_dir, const std::string& mode,
                    int frames, double target_fps, int min_frames, int max_frames,
                    const std::vector<double>& target_box, double match_iou) {
    auto bundle = io::load_scene_bundle(scene_dir);
    if (!bundle) return fail(bundle.error());
    const auto& stream = bundle.value().stream;

    std::vector<int> indices;
    if (mode == "uniform") {
        if (frames < 1 || frames > stream.size())
            return fail("--frames must be in [1, frame count]");
        indices = prep::uniform_sample(stream.size(), frames);
    } else if (mode == "fps") {
        indices = prep::fps_adaptive_sample(stream, target_fps, min_frames, max_frames);
    } else {
        return fail("unknown sampling mode \"" + mode + "\" (uniform|fps)");
    }

    cli::Report report("prep-frames");
    report.kv("config.task", "prep-frames");
    report.kv("config.scene", scene_dir);
    report.kv("config.mode", mode);
    if (mode == "uniform") report.kv("config.frames", frames);
    if (mode == "fps") {
        report.kv("config.target_fps", target_fps);
        report.kv("config.min_frames", min_frames);
        report.kv("config.max_frames", max_frames);
    }
    report.kv("config.match_iou", match_iou);
    report.kv("config.seed", static_cast<long>(opts.seed));

    report.section("sampling");
    report.kv("frame_count", stream.size());
    std::string joined;
    for (size_t i = 0; i < indices.size(); ++i)
        joined += (i ? "," : "") + std::to_string(indices[i]);
    report.kv("indices", joined);

    // Distinct instances in a stable order.
    std::map<std::string, std::pair<std::string, OrientedBox3D>> instances;
    for (const auto& ann : bundle.value().annotations)
        instances.emplace(ann.instance_id, std::make_pair(ann.category, ann.box_world));

    report.section("best_frame");
    report.row({"target", "category", "frame", "area_px2", "note"});
    auto emit_selection = [&](const std::string& name, const std::string& category,
                              const OrientedBox3D& target) {
        const auto chosen =
            prep::select_best_frame(target, bundle.value().annotations, stream, match_iou);
        if (!chosen.ok()) {
            report.row({name, category, "-", "-", chosen.error()});
            return;
        }
        const double area = prep::project_box_area(
            target, stream.frames[static_cast<size_t>(chosen.value())]);
        report.row({name, category, std::to_string(chosen.value()), cli::fmt4(area), "-"});
    };
    if (!target_box.empty()) {
        const OrientedBox3D target{{target_box[0], target_box[1], target_box[2]},
                                   {target_box[3], target_box[4], target_box[5]},
                                   {target_box[6], target_box[7], target_box[8]}};
        emit_selection("target", "-", target);
    } else {
        for (const auto& [id, info] : instances) emit_selection(id, info.first, info.second);
    }

    report.section("rebased_annotations");
    report.row({"instance", "category", "cx", "cy", "cz", "w", "h", "d", "yaw", "pitch", "roll"});
    for (const auto& [id, info] : instances) {
        const OrientedBox3D rebased =
            prep::rebase_annotations({info.second}, stream.frames[0].world_from_camera)[0];
        report.row({id, info.first, cli::fmt4(rebased.center.x), cli::fmt4(rebased.center.y),
                    cli::fmt4(rebased.center.z), cli::fmt4(rebased.size.x),
                    cli::fmt4(rebased.size.y), cli::fmt4(rebased.size.z),
                    cli::fmt4(rebased.angles.x), cli::fmt4(rebased.angles.y),
                    cli::fmt4(rebased.angles.z)});
    }

    std::string human = "prep-frames: " + std::to_string(stream.size()) + " frames, sampled " +
                        std::to_string(indices.size()) + " [" + joined + "]\n";
    human += "  " + std::to_string(instances.size()) + " annotated instances\n";
    return emit(report, opts.out, human);
}

// ---------------------------------------------------------------------------
// fuse-demo
// ---------------------------------------------------------------------------

int run_fuse_demo(const CommonOpts& opts, int height, int width, int patch, int channels,
                  int hidden, const std::string& visual_path, const std::string& geometry_path) {
    using namespace scene3d::fusion;
    const auto [rows, cols] = patch_shape(height, width, patch);
    if (rows < 2 || cols < 2 || rows % 2 != 0 || cols % 2 != 0)
        return fail("patch grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " must be even in both dimensions");

    PatchGrid visual, geometry;
    if (!visual_path.empty()) {
        auto g = load_grid(visual_path);
        if (!g) return fail(g.error());
        visual = std::move(g.value());
    } else {
        visual = seeded_grid(rows, cols, channels, Provenance::visual, opts.seed);
    }
    if (!geometry_path.empty()) {
        auto g = load_grid(geometry_path);
        if (!g) return fail(g.error());
        geometry = std::move(g.value());
    } else {
        geometry = seeded_grid(rows, cols, channels, Provenance::geometry, opts.seed + 1);
    }
    if (geometry.rows != visual.rows || geometry.cols != visual.cols ||
        geometry.channels != visual.channels)
        return fail("visual and geometry grids disagree in shape");

    const TwoLayerMlp mlp = TwoLayerMlp::seeded(visual.channels, hidden, opts.seed + 2);
    const MergedGrid vis_merged = merge_2x2(visual, mlp);
    const MergedGrid geo_merged = merge_2x2(geometry, mlp);
    const MergedGrid fused = fuse(geo_merged, vis_merged);

    // zero-geometry fusion must reproduce the visual tokens exactly
    MergedGrid zeros = geo_merged;
    for (double& v : zeros.data) v = 0.0;
    const MergedGrid identity = fuse(zeros, vis_merged);
    double id_err = 0.0;
    for (size_t i = 0; i < identity.data.size(); ++i)
        id_err = std::max(id_err, std::abs(identity.data[i] - vis_merged.data[i]));

    Xoshiro256 rng(opts.seed + 3);
    std::vector<double> block(static_cast<size_t>(mlp.input_dim));
    for (double& v : block) v = rng.uniform(-1, 1);
    const double grad_err = mlp_gradient_check(mlp, block);

    double mean = 0.0;
    for (double v : fused.data) mean += v;
    mean /= static_cast<double>(fused.data.size());

    cli::Report report("fuse-demo");
    report.kv("config.task", "fuse-demo");
    report.kv("config.height", height);
    report.kv("config.width", width);
    report.kv("config.patch", patch);
    report.kv("config.channels", visual.channels);
    report.kv("config.hidden", hidden);
    report.kv("config.seed", static_cast<long>(opts.seed));
    report.section("shapes");
    report.kv("patch_grid", std::to_string(rows) + "x" + std::to_string(cols) + "x" +
                                std::to_string(visual.channels));
    report.kv("merged_grid", std::to_string(vis_merged.rows) + "x" +
                                 std::to_string(vis_merged.cols) + "x" +
                                 std::to_string(vis_merged.channels));
    report.section("fusion");
    report.kv("zero_geometry_identity_max_abs_err", cli::fmt6e(id_err));
    report.kv("fused_mean", cli::fmt6e(mean));
    report.section("gradient_check");
    report.kv("max_rel_err", cli::fmt6e(grad_err));
    report.kv("pass_1e-4", grad_err <= 1e-4 ? "true" : "false");

    std::string human = "fuse-demo: " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " patches -> " + std::to_string(vis_merged.rows) + "x" +
                        std::to_string(vis_merged.cols) + " merged tokens\n";
    human += "  zero-geometry identity error " + cli::fmt6e(id_err) + "\n";
    human += "  gradient check max rel err " + cli::fmt6e(grad_err) +
             (grad_err <= 1e-4 ? " (pass)" : " (FAIL)") + "\n";
    return emit(report, opts.out, human);
}

// ---------------------------------------------------------------------------
// iou
// ---------------------------------------------------------------------------

int run_iou(const std::vector<double>& numbers) {
    const OrientedBox3D a{{numbers[0], numbers[1], numbers[2]},
                          {numbers[3], numbers[4], numbers[5]},
                          {numbers[6], numbers[7], numbers[8]}};
    const OrientedBox3D b{{numbers[9], numbers[10], numbers[11]},
                          {numbers[12], numbers[13], numbers[14]},
                          {numbers[15], numbers[16], numbers[17]}};
    if (!box_is_valid(a) || !box_is_valid(b))
        return fail("boxes must be finite with non-negative sizes");
    std::cout << cli::fmt6(iou_3d(a, b)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scene3d: oriented-box geometry, model-output protocol and evaluation "
                 "harness for video-based 3D scene understanding"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file; command-line flags take precedence");

    CommonOpts opts;
    std::string proposals_path, alias_path;
    std::vector<double> thresholds = {0.25, 0.5};
    bool no_refine = false;
    double iou_thresh = 0.25;
    double gate = 0.5;

    auto add_common = [&](CLI::App* cmd, bool needs_pred_gt) {
        if (needs_pred_gt) {
            cmd->add_option("--pred", opts.pred, "Predictions file (JSONL: {id, response})")
                ->required()
                ->check(CLI::ExistingFile);
            cmd->add_option("--gt", opts.gt, "Ground-truth bundle (JSON)")
                ->required()
                ->check(CLI::ExistingFile);
        }
        cmd->add_option("--out", opts.out, "Report output path");
        cmd->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", opts.seed, "Random seed echoed into the report");
        cmd->add_flag("--strict", opts.strict, "Abort on malformed model output");
        cmd->add_flag("--lenient", [&](size_t) { opts.strict = false; },
                      "Skip malformed entries with warnings (default)");
    };

    CLI::App* grounding = app.add_subcommand("eval-grounding", "Acc@IoU grounding scorer");
    add_common(grounding, true);
    grounding->add_option("--proposals", proposals_path, "Proposal boxes (JSON)")
        ->check(CLI::ExistingFile);
    grounding->add_option("--iou-thresh", thresholds, "Accuracy thresholds")
        ->expected(-1)
        ->check(CLI::Range(1e-9, 1.0));
    grounding->add_flag("--no-refine", no_refine, "Score raw boxes even when proposals exist");

    CLI::App* detect = app.add_subcommand("eval-detect", "Greedy-matching detection scorer");
    add_common(detect, true);
    detect->add_option("--iou-thresh", iou_thresh, "Matching IoU threshold")
        ->check(CLI::Range(1e-9, 1.0));
    detect->add_option("--aliases", alias_path, "Category alias table (JSON)")
        ->check(CLI::ExistingFile);

    CLI::App* caption = app.add_subcommand("eval-caption", "IoU-gated caption metrics");
    add_common(caption, true);
    caption->add_option("--gate", gate, "IoU gate")->check(CLI::Range(0.0, 1.0));

    std::string scene_dir, mode = "uniform";
    int frames = 24, min_frames = 4, max_frames = 8;
    double target_fps = 2.0, match_iou = 0.25;
    std::vector<double> target_box;
    CLI::App* prep = app.add_subcommand("prep-frames", "Frame sampling and best-frame selection");
    add_common(prep, false);
    prep->add_option("--scene", scene_dir, "Scene bundle directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    prep->add_option("--mode", mode, "Sampling mode: uniform|fps");
    prep->add_option("--frames", frames, "Frame count for uniform mode");
    prep->add_option("--fps", target_fps, "Target FPS for fps mode");
    prep->add_option("--min-frames", min_frames, "Adaptive lower bound");
    prep->add_option("--max-frames", max_frames, "Adaptive upper bound");
    prep->add_option("--target-box", target_box, "Explicit 9-number target box")->expected(9);
    prep->add_option("--match-iou", match_iou, "Instance match threshold");

    int height = 448, width = 448, patch = 14, channels = 8, hidden = 32;
    std::string visual_path, geometry_path;
    CLI::App* fusedemo = app.add_subcommand("fuse-demo", "Token-fusion shape and gradient report");
    add_common(fusedemo, false);
    fusedemo->add_option("--height", height, "Image height (pixels)");
    fusedemo->add_option("--width", width, "Image width (pixels)");
    fusedemo->add_option("--patch", patch, "Patch size (pixels)");
    fusedemo->add_option("--channels", channels, "Feature channels");
    fusedemo->add_option("--hidden", hidden, "MLP hidden width");
    fusedemo->add_option("--visual-grid", visual_path, "Visual grid file")
        ->check(CLI::ExistingFile);
    fusedemo->add_option("--geometry-grid", geometry_path, "Geometry grid file")
        ->check(CLI::ExistingFile);

    std::vector<double> iou_numbers;
    CLI::App* iou_cmd = app.add_subcommand("iou", "IoU of two 9-number oriented boxes");
    iou_cmd->add_option("boxes", iou_numbers, "center(3) size(3) angles(3), twice")
        ->expected(18);

    CLI11_PARSE(app, argc, argv);

    try {
        if (grounding->parsed()) {
            if (opts.out.empty()) opts.out = "eval-grounding.report.txt";
            return run_eval_grounding(opts, proposals_path, thresholds, !no_refine);
        }
        if (detect->parsed()) {
            if (opts.out.empty()) opts.out = "eval-detect.report.txt";
            return run_eval_detect(opts, iou_thresh, alias_path);
        }
        if (caption->parsed()) {
            if (opts.out.empty()) opts.out = "eval-caption.report.txt";
            return run_eval_caption(opts, gate);
        }
        if (prep->parsed()) {
            if (opts.out.empty()) opts.out = "prep-frames.report.txt";
            return run_prep_frames(opts, scene_dir, mode, frames, target_fps, min_frames,
                                   max_frames, target_box, match_iou);
        }
        if (fusedemo->parsed()) {
            if (opts.out.empty()) opts.out = "fuse-demo.report.txt";
            return run_fuse_demo(opts, height, width, patch, channels, hidden, visual_path,
                                 geometry_path);
        }
        if (iou_cmd->parsed()) return run_iou(iou_numbers);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return fail("no subcommand selected");
}
