#pragma once

#include <string>
#include <vector>

#include "scene3d/expected.hpp"
#include "scene3d/geometry.hpp"
#include "scene3d/pose.hpp"

namespace scene3d::prep {

struct Intrinsics {
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
};

struct CameraFrame {
    Pose world_from_camera;
    Intrinsics intrinsics;
    double width = 0.0;   // pixels
    double height = 0.0;  // pixels
};

// A scene's frame sequence. Timestamps are optional; when absent, frames are
// treated as 1 s apart (t_i = i).
struct FrameStream {
    std::vector<double> timestamps;  // empty or strictly increasing, size N
    std::vector<CameraFrame> frames;

    int size() const { return static_cast<int>(frames.size()); }
    double timestamp(int i) const {
        return timestamps.empty() ? static_cast<double>(i) : timestamps[static_cast<size_t>(i)];
    }
};

struct VisibleAnnotation {
    int frame_index = 0;
    std::string instance_id;
    std::string category;
    OrientedBox3D box_world;
};

// K distinct indices over [0, N-1]: [0] for K = 1, otherwise
// round(j*(N-1)/(K-1)) with duplicate collisions shifted forward. Throws when
// K < 1 or K > N.
std::vector<int> uniform_sample(int n, int k);

// Frames nearest to 1/target_fps ticks over the stream span; pads to
// min(min_k, N) frames via uniform sampling when too few ticks land, and
// uniformly subsamples the tick list when it exceeds max_k.
std::vector<int> fps_adaptive_sample(const FrameStream& stream, double target_fps = 2.0,
                                     int min_k = 4, int max_k = 8);

// Projected 2D area in pixels^2 of the box corners: camera-frame corners with
// z > 1e-6 m are pinhole-projected, hulled, and the hull is clipped to the
// image rectangle. Returns 0 when every corner is behind the camera.
double project_box_area(const OrientedBox3D& box_world, const CameraFrame& frame);

// Picks the annotation instance with maximum IoU against the target (must
// reach match_iou_min), then the visible frame of that instance with the
// largest projected area, ties to the lowest frame index. The no-match case
// is an error value so callers can skip-and-log the sample.
Expected<int> select_best_frame(const OrientedBox3D& target_box_world,
                                const std::vector<VisibleAnnotation>& annotations,
                                const FrameStream& stream, double match_iou_min = 0.25);

// transform_box with invert(first_frame_pose) applied to every box.
std::vector<OrientedBox3D> rebase_annotations(const std::vector<OrientedBox3D>& boxes_world,
                                              const Pose& first_frame_pose);

// 2D helpers shared by the projection path (exposed for testing).
struct Point2 {
    double x = 0.0, y = 0.0;
};
std::vector<Point2> convex_hull(std::vector<Point2> points);
std::vector<Point2> clip_polygon_to_rect(const std::vector<Point2>& poly, double xmin, double ymin,
                                         double xmax, double ymax);
double polygon_area(const std::vector<Point2>& poly);

}  // namespace scene3d::prep
