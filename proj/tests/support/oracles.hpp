#pragma once

// Independent oracle implementations used by the unit and acceptance suites.
// These deliberately avoid the library's polytope-clipping, hull and metric
// code paths so that agreement is evidence, not tautology.

#include <cstdint>
#include <string>
#include <vector>

#include "scene3d/data_prep.hpp"
#include "scene3d/geometry.hpp"
#include "scene3d/pose.hpp"
#include "scene3d/rng.hpp"

namespace scene3d::oracle {

// Closed-form axis-aligned IoU; boxes must carry zero angles.
double aabb_iou(const OrientedBox3D& a, const OrientedBox3D& b);

// Monte-Carlo intersection volume: uniform samples in a, membership tested
// against b through a single fused affine map.
double mc_intersection_volume(const OrientedBox3D& a, const OrientedBox3D& b, size_t samples,
                              uint64_t seed);
double mc_iou(const OrientedBox3D& a, const OrientedBox3D& b, size_t samples, uint64_t seed);

// Rz(yaw) * Ry(pitch) * Rx(roll) assembled from three explicit axis
// rotations (the library writes the closed-form product directly).
Mat3 euler_matrix_product(double yaw, double pitch, double roll);

// Projected-area oracle: counts image pixel centers whose camera ray hits
// the oriented box (slab test in the box frame). No hulls, no polygon
// clipping. samples_per_pixel_axis supersamples each pixel.
double raster_projected_area(const OrientedBox3D& box_world, const prep::CameraFrame& frame,
                             int samples_per_pixel_axis = 1);

// Maximum achievable TP count for one category via exhaustive assignment
// (bitmask DP over the ground-truth set); inputs are the IoU matrix and the
// threshold.
long optimal_tp(const std::vector<std::vector<double>>& iou_matrix, double iou_threshold);

// Second CIDEr-D implementation, n-grams keyed by token vectors.
std::vector<double> cider_d_oracle(const std::vector<std::vector<std::string>>& candidates,
                                   const std::vector<std::vector<std::vector<std::string>>>& refs,
                                   int n_max = 4, double sigma = 6.0);

// Regex-based tokenizer oracle.
std::vector<std::string> tokenize_oracle(const std::string& text);

// Sentence BLEU-4 via sorted-multiset n-gram intersection.
double bleu4_oracle(const std::vector<std::string>& candidate,
                    const std::vector<std::vector<std::string>>& refs);

// ROUGE-L via memoized recursive LCS.
double rouge_l_oracle(const std::vector<std::string>& candidate,
                      const std::vector<std::vector<std::string>>& refs);

// Randomized fixtures.
OrientedBox3D random_box(Xoshiro256& rng, double center_range = 2.0, double size_lo = 0.1,
                         double size_hi = 2.0);
Pose random_pose(Xoshiro256& rng, double translation_range = 3.0);
Vec3 random_point(Xoshiro256& rng, double range = 3.0);

}  // namespace scene3d::oracle
