#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "scene3d/eval_detection.hpp"
#include "scene3d/iou.hpp"
#include "scene3d/rng.hpp"
#include "support/oracles.hpp"

using namespace scene3d;
using namespace scene3d::eval;
using scene3d::proto::DetectionItem;

namespace {
OrientedBox3D cube_at(double x, double y = 0, double z = 0, double sx = 1) {
    return {{x, y, z}, {sx, 1, 1}, {0, 0, 0}};
}
}  // namespace

TEST_CASE("greedy_match basics") {
    DetectionGroundTruth gt;
    gt.scene_id = "s";
    gt.boxes = {{"chair", cube_at(0)}};

    SUBCASE("exact match is a TP") {
        const auto m = greedy_match({{"chair", cube_at(0)}}, gt, 0.25);
        CHECK(m.per_category.at("chair").tp == 1);
        CHECK(m.per_category.at("chair").fp == 0);
        CHECK(m.per_category.at("chair").fn == 0);
        REQUIRE(m.pairings.size() == 1);
        CHECK(m.pairings[0].iou == doctest::Approx(1.0));
    }
    SUBCASE("category gate blocks cross-class matches") {
        gt.boxes = {{"table", cube_at(0)}};
        const auto m = greedy_match({{"chair", cube_at(0)}}, gt, 0.25);
        CHECK(m.per_category.at("chair").fp == 1);
        CHECK(m.per_category.at("table").fn == 1);
    }
    SUBCASE("category comparison is normalized") {
        const auto m = greedy_match({{"  CHAIR ", cube_at(0)}}, gt, 0.25);
        CHECK(m.per_category.at("chair").tp == 1);
    }
    SUBCASE("alias table folds spellings together") {
        CategoryNormalizer aliased(std::map<std::string, std::string>{{"trash bin", "bin"}});
        gt.boxes = {{"bin", cube_at(0)}};
        const auto m = greedy_match({{"Trash  Bin", cube_at(0)}}, gt, 0.25, aliased);
        CHECK(m.per_category.at("bin").tp == 1);
    }
}

TEST_CASE("greedy matching marks ground truths as used") {
    // p1: IoU 0.6 with g1, 0.4 with g2. p2: IoU 0.5 with g1, none with g2.
    // Greedy: p1 takes g1; p2 finds g1 used and g2 unreachable.
    DetectionGroundTruth gt;
    gt.scene_id = "s";
    gt.boxes = {{"chair", cube_at(0.0)}, {"chair", cube_at(19.0 / 28.0)}};
    const std::vector<DetectionItem> preds = {{"chair", cube_at(0.25)},
                                              {"chair", cube_at(-1.0 / 3.0)}};

    CHECK(iou_3d(preds[0].box, gt.boxes[0].second) == doctest::Approx(0.6));
    CHECK(iou_3d(preds[0].box, gt.boxes[1].second) == doctest::Approx(0.4));
    CHECK(iou_3d(preds[1].box, gt.boxes[0].second) == doctest::Approx(0.5));
    CHECK(iou_3d(preds[1].box, gt.boxes[1].second) == doctest::Approx(0.0));

    const auto m = greedy_match(preds, gt, 0.25);
    CHECK(m.per_category.at("chair").tp == 1);
    CHECK(m.per_category.at("chair").fp == 1);
    CHECK(m.per_category.at("chair").fn == 1);
    REQUIRE(m.pairings.size() == 1);
    CHECK(m.pairings[0].pred_index == 0);
    CHECK(m.pairings[0].gt_index == 0);
}

TEST_CASE("greedy_match rejects invalid thresholds") {
    DetectionGroundTruth gt;
    CHECK_THROWS_AS(greedy_match({}, gt, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(greedy_match({}, gt, 1.5), std::invalid_argument);
}

TEST_CASE("per-class precision/recall/F1 arithmetic") {
    CHECK(prf_from_counts({1, 0, 0}).precision == doctest::Approx(1.0));
    CHECK(prf_from_counts({1, 0, 0}).recall == doctest::Approx(1.0));
    CHECK(prf_from_counts({1, 0, 0}).f1 == doctest::Approx(1.0));

    const Prf zero = prf_from_counts({0, 3, 2});
    CHECK(zero.precision == 0.0);
    CHECK(zero.recall == 0.0);
    CHECK(zero.f1 == 0.0);

    const Prf mixed = prf_from_counts({3, 1, 2});
    CHECK(mixed.precision == doctest::Approx(0.75));
    CHECK(mixed.recall == doctest::Approx(0.6));
    CHECK(mixed.f1 == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35));
}

TEST_CASE("macro_average skips classes absent from GT and predictions") {
    MatchingResult total;
    total.per_category["chair"] = {1, 0, 0};  // perfect
    const MacroScores solo = macro_average(total, {"chair", "couch"});
    CHECK(solo.classes_counted == 1);
    CHECK(solo.ap == doctest::Approx(1.0));
    CHECK(solo.ar == doctest::Approx(1.0));
    CHECK(solo.f1 == doctest::Approx(1.0));

    total.per_category["table"] = {0, 2, 1};  // F1 0
    const MacroScores pair = macro_average(total, {"chair", "table"});
    CHECK(pair.classes_counted == 2);
    CHECK(pair.f1 == doctest::Approx(0.5));

    // per-class (P,R) of {(1, 0.5), (0.5, 1)} averages to (0.75, 0.75)
    MatchingResult synth;
    synth.per_category["bed"] = {1, 0, 1};
    synth.per_category["bin"] = {1, 1, 0};
    const MacroScores avg = macro_average(synth, {"bed", "bin"});
    CHECK(avg.ap == doctest::Approx(0.75));
    CHECK(avg.ar == doctest::Approx(0.75));
}

TEST_CASE("count conservation holds on random scenes") {
    Xoshiro256 rng(139);
    const std::vector<std::string> classes = {"chair", "table", "bed"};
    for (int t = 0; t < 40; ++t) {
        DetectionGroundTruth gt;
        gt.scene_id = "s";
        const int num_gt = static_cast<int>(rng.uniform(0, 6));
        for (int g = 0; g < num_gt; ++g)
            gt.boxes.emplace_back(classes[static_cast<size_t>(rng.uniform(0, 3))],
                                  oracle::random_box(rng));
        std::vector<DetectionItem> preds;
        const int num_pred = static_cast<int>(rng.uniform(0, 6));
        for (int p = 0; p < num_pred; ++p)
            preds.push_back({classes[static_cast<size_t>(rng.uniform(0, 3))],
                             oracle::random_box(rng)});

        const auto m = greedy_match(preds, gt, 0.25);
        for (const auto& cls : classes) {
            long gt_count = 0, pred_count = 0;
            for (const auto& [c, b] : gt.boxes)
                if (c == cls) ++gt_count;
            for (const auto& p : preds)
                if (p.label == cls) ++pred_count;
            const auto it = m.per_category.find(cls);
            const CategoryCounts counts = it == m.per_category.end() ? CategoryCounts{} : it->second;
            CHECK(counts.tp + counts.fn == gt_count);
            CHECK(counts.tp + counts.fp == pred_count);
        }
    }
}

TEST_CASE("raising the IoU threshold never increases TP") {
    Xoshiro256 rng(149);
    for (int t = 0; t < 30; ++t) {
        DetectionGroundTruth gt;
        gt.scene_id = "s";
        std::vector<DetectionItem> preds;
        for (int k = 0; k < 4; ++k) {
            const OrientedBox3D base = oracle::random_box(rng);
            gt.boxes.emplace_back("chair", base);
            OrientedBox3D near = base;
            near.center = base.center + Vec3{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4),
                                             rng.uniform(-0.4, 0.4)};
            preds.push_back({"chair", near});
        }
        long prev = 1000;
        for (double thr : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const auto m = greedy_match(preds, gt, thr);
            const long tp = m.per_category.at("chair").tp;
            CHECK(tp <= prev);
            prev = tp;
        }
    }
}

TEST_CASE("greedy TP never exceeds the optimal assignment") {
    Xoshiro256 rng(151);
    for (int t = 0; t < 60; ++t) {
        const int num_pred = 1 + static_cast<int>(rng.uniform(0, 5));
        const int num_gt = 1 + static_cast<int>(rng.uniform(0, 5));
        DetectionGroundTruth gt;
        gt.scene_id = "s";
        std::vector<DetectionItem> preds;
        for (int g = 0; g < num_gt; ++g) gt.boxes.emplace_back("chair", oracle::random_box(rng, 1.0));
        for (int p = 0; p < num_pred; ++p)
            preds.push_back({"chair", oracle::random_box(rng, 1.0)});

        std::vector<std::vector<double>> iou_matrix(static_cast<size_t>(num_pred));
        for (int p = 0; p < num_pred; ++p)
            for (int g = 0; g < num_gt; ++g)
                iou_matrix[static_cast<size_t>(p)].push_back(
                    iou_3d(preds[static_cast<size_t>(p)].box,
                           gt.boxes[static_cast<size_t>(g)].second));

        const auto m = greedy_match(preds, gt, 0.25);
        CHECK(m.per_category.at("chair").tp <= oracle::optimal_tp(iou_matrix, 0.25));
    }
}

TEST_CASE("matching is deterministic for identical inputs") {
    Xoshiro256 rng(157);
    DetectionGroundTruth gt;
    gt.scene_id = "s";
    std::vector<DetectionItem> preds;
    for (int k = 0; k < 5; ++k) {
        gt.boxes.emplace_back("chair", oracle::random_box(rng, 1.0));
        preds.push_back({"chair", oracle::random_box(rng, 1.0)});
    }
    const auto a = greedy_match(preds, gt, 0.25);
    const auto b = greedy_match(preds, gt, 0.25);
    CHECK(a.pairings.size() == b.pairings.size());
    for (size_t i = 0; i < a.pairings.size(); ++i) {
        CHECK(a.pairings[i].pred_index == b.pairings[i].pred_index);
        CHECK(a.pairings[i].gt_index == b.pairings[i].gt_index);
    }
}
