#pragma once

#include <string>
#include <vector>

#include "scene3d/captions.hpp"
#include "scene3d/geometry.hpp"

namespace scene3d::eval {

// Captioning samples arrive pre-paired: proposal i is scored against GT
// box i, following the detector-proposal workflow.
struct CaptionSample {
    std::string id;
    OrientedBox3D proposal_box;
    OrientedBox3D gt_box;
    std::string candidate;
    std::vector<std::string> references;
};

struct CaptionSampleScore {
    std::string id;
    double iou = 0.0;
    bool gated_out = false;
    double cider = 0.0;
    double bleu4 = 0.0;
    double rouge_l = 0.0;
};

struct CaptionReport {
    double gate = 0.5;
    double cider_mean = 0.0;
    double bleu4_mean = 0.0;
    double rouge_l_mean = 0.0;
    std::vector<CaptionSampleScore> samples;
};

// Metrics are computed per sample and zeroed when iou(proposal, gt) < gate;
// corpus means include the zeros. The CIDEr IDF statistics always cover
// every sample's references so gating cannot change ungated scores.
CaptionReport iou_gated_scores(const std::vector<CaptionSample>& samples, double gate = 0.5,
                               int jobs = 1);

}  // namespace scene3d::eval
