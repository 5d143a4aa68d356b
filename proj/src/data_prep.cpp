#include "scene3d/data_prep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "scene3d/iou.hpp"

namespace scene3d::prep {

std::vector<int> uniform_sample(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("uniform_sample: need 1 <= K <= N");
    if (k == 1) return {0};
    std::vector<int> out;
    out.reserve(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        const double pos = static_cast<double>(j) * (n - 1) / (k - 1);
        int idx = static_cast<int>(std::llround(pos));
        if (!out.empty() && idx <= out.back()) idx = out.back() + 1;  // forward shift
        out.push_back(std::min(idx, n - 1));
    }
    return out;
}

namespace {

double stream_duration(const FrameStream& stream) {
    const int n = stream.size();
    if (n <= 1) return 0.0;
    const double span = stream.timestamp(n - 1) - stream.timestamp(0);
    // Count the last frame as one average interval long, so a 30-frame
    // 30 fps clip spans 1.0 s rather than 29/30 s.
    return span + span / (n - 1);
}

int nearest_frame(const FrameStream& stream, double t) {
    const int n = stream.size();
    int best = 0;
    double best_dist = std::abs(stream.timestamp(0) - t);
    for (int i = 1; i < n; ++i) {
        const double dist = std::abs(stream.timestamp(i) - t);
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

}  // namespace

std::vector<int> fps_adaptive_sample(const FrameStream& stream, double target_fps, int min_k,
                                     int max_k) {
    const int n = stream.size();
    if (n == 0) return {};
    const double t0 = stream.timestamp(0);
    const double duration = stream_duration(stream);
    const int num_ticks = std::max(1, static_cast<int>(std::floor(duration * target_fps)));

    std::vector<int> picked;
    for (int k = 0; k < num_ticks; ++k) {
        const int idx = nearest_frame(stream, t0 + static_cast<double>(k) / target_fps);
        if (picked.empty() || idx != picked.back()) picked.push_back(idx);
    }

    if (static_cast<int>(picked.size()) > max_k) {
        const std::vector<int> keep = uniform_sample(static_cast<int>(picked.size()), max_k);
        std::vector<int> reduced;
        reduced.reserve(keep.size());
        for (int pos : keep) reduced.push_back(picked[static_cast<size_t>(pos)]);
        picked = std::move(reduced);
    }
    const int floor_k = std::min(min_k, n);
    if (static_cast<int>(picked.size()) < floor_k) return uniform_sample(n, floor_k);
    return picked;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;

    auto cross2 = [](const Point2& o, const Point2& a, const Point2& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<Point2> clip_polygon_to_rect(const std::vector<Point2>& poly, double xmin, double ymin,
                                         double xmax, double ymax) {
    // Sutherland-Hodgman against the four rectangle edges.
    auto clip_edge = [](const std::vector<Point2>& input, auto inside, auto intersect) {
        std::vector<Point2> out;
        const size_t n = input.size();
        for (size_t i = 0; i < n; ++i) {
            const Point2& a = input[i];
            const Point2& b = input[(i + 1) % n];
            const bool ia = inside(a), ib = inside(b);
            if (ia) out.push_back(a);
            if (ia != ib) out.push_back(intersect(a, b));
        }
        return out;
    };
    auto lerp_x = [](const Point2& a, const Point2& b, double x) {
        const double t = (x - a.x) / (b.x - a.x);
        return Point2{x, a.y + t * (b.y - a.y)};
    };
    auto lerp_y = [](const Point2& a, const Point2& b, double y) {
        const double t = (y - a.y) / (b.y - a.y);
        return Point2{a.x + t * (b.x - a.x), y};
    };

    std::vector<Point2> p = poly;
    p = clip_edge(p, [&](const Point2& q) { return q.x >= xmin; },
                  [&](const Point2& a, const Point2& b) { return lerp_x(a, b, xmin); });
    if (p.empty()) return p;
    p = clip_edge(p, [&](const Point2& q) { return q.x <= xmax; },
                  [&](const Point2& a, const Point2& b) { return lerp_x(a, b, xmax); });
    if (p.empty()) return p;
    p = clip_edge(p, [&](const Point2& q) { return q.y >= ymin; },
                  [&](const Point2& a, const Point2& b) { return lerp_y(a, b, ymin); });
    if (p.empty()) return p;
    p = clip_edge(p, [&](const Point2& q) { return q.y <= ymax; },
                  [&](const Point2& a, const Point2& b) { return lerp_y(a, b, ymax); });
    return p;
}

double polygon_area(const std::vector<Point2>& poly) {
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) * 0.5;
}

double project_box_area(const OrientedBox3D& box_world, const CameraFrame& frame) {
    constexpr double kZEps = 1e-6;  // meters
    const Pose camera_from_world = invert(frame.world_from_camera);
    std::vector<Point2> projected;
    projected.reserve(8);
    for (const Vec3& corner : box_corners(box_world)) {
        const Vec3 cam = camera_from_world.apply(corner);
        if (cam.z <= kZEps) continue;  // behind-camera corners are dropped
        projected.push_back({frame.intrinsics.fx * cam.x / cam.z + frame.intrinsics.cx,
                             frame.intrinsics.fy * cam.y / cam.z + frame.intrinsics.cy});
    }
    if (projected.size() < 3) return 0.0;
    const std::vector<Point2> hull = convex_hull(std::move(projected));
    const std::vector<Point2> clipped =
        clip_polygon_to_rect(hull, 0.0, 0.0, frame.width, frame.height);
    return polygon_area(clipped);
}

Expected<int> select_best_frame(const OrientedBox3D& target_box_world,
                                const std::vector<VisibleAnnotation>& annotations,
                                const FrameStream& stream, double match_iou_min) {
    if (annotations.empty())
        throw std::invalid_argument("select_best_frame: empty annotation list");

    // Best-overlap instance first. Per-instance IoU is the max over its
    // per-frame entries (the world box may be re-annotated per frame).
    std::map<std::string, double> instance_iou;
    for (const auto& ann : annotations) {
        const double iou = iou_3d(ann.box_world, target_box_world);
        auto [it, inserted] = instance_iou.emplace(ann.instance_id, iou);
        if (!inserted) it->second = std::max(it->second, iou);
    }
    std::string best_instance;
    double best_iou = -1.0;
    for (const auto& [id, iou] : instance_iou) {
        if (iou > best_iou) {
            best_iou = iou;
            best_instance = id;
        }
    }
    if (best_iou < match_iou_min)
        return Unexpected("no annotation instance reaches IoU " + std::to_string(match_iou_min) +
                          " with the target box");

    int best_frame = -1;
    double best_area = -1.0;
    for (const auto& ann : annotations) {
        if (ann.instance_id != best_instance) continue;
        if (ann.frame_index < 0 || ann.frame_index >= stream.size()) continue;
        const double area =
            project_box_area(ann.box_world, stream.frames[static_cast<size_t>(ann.frame_index)]);
        if (area > best_area || (area == best_area && ann.frame_index < best_frame)) {
            best_area = area;
            best_frame = ann.frame_index;
        }
    }
    if (best_frame < 0) return Unexpected("matched instance has no in-range visible frame");
    return best_frame;
}

std::vector<OrientedBox3D> rebase_annotations(const std::vector<OrientedBox3D>& boxes_world,
                                              const Pose& first_frame_pose) {
    const Pose to_frame0 = invert(first_frame_pose);
    std::vector<OrientedBox3D> out;
    out.reserve(boxes_world.size());
    for (const auto& box : boxes_world) out.push_back(transform_box(box, to_frame0));
    return out;
}

}  // namespace scene3d::prep
