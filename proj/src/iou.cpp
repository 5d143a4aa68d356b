#include "scene3d/iou.hpp"

#include <algorithm>
#include <cmath>

namespace scene3d {

namespace {

constexpr double kPlaneEps = 1e-12;   // on-plane vertices count as inside
constexpr double kVolumeEps = 1e-15;  // sliver volumes collapse to 0
constexpr double kMergeEps = 1e-10;   // duplicate cap vertices

Vec3 intersect_edge(const Vec3& a, const Vec3& b, double da, double db) {
    // da, db are signed distances to the plane with opposite signs.
    double t = da / (da - db);
    return a + (b - a) * t;
}

}  // namespace

ConvexPolytope polytope_from_box(const OrientedBox3D& box) {
    ConvexPolytope poly;
    auto corners = box_corners(box);
    poly.vertices.assign(corners.begin(), corners.end());
    // Outward-wound quads for the corner order of box_corners().
    poly.faces = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 4, 6, 2},
                  {1, 3, 7, 5}, {0, 1, 5, 4}, {2, 6, 7, 3}};
    return poly;
}

std::array<HalfSpace, 6> box_half_spaces(const OrientedBox3D& box) {
    const Mat3 r = box_rotation(box);
    const Vec3 h = box.size * 0.5;
    std::array<HalfSpace, 6> out;
    for (int axis = 0; axis < 3; ++axis) {
        const Vec3 n = r.col(axis);
        const double half = h[axis];
        const double c = dot(n, box.center);
        out[2 * axis] = {n, c + half};
        out[2 * axis + 1] = {-n, -(c - half)};
    }
    return out;
}

ConvexPolytope clip_polytope(const ConvexPolytope& poly, const HalfSpace& hs) {
    if (poly.empty()) return {};

    std::vector<double> dist(poly.vertices.size());
    bool any_outside = false, all_outside = true;
    for (size_t i = 0; i < poly.vertices.size(); ++i) {
        dist[i] = dot(hs.normal, poly.vertices[i]) - hs.offset;
        if (dist[i] > kPlaneEps)
            any_outside = true;
        else
            all_outside = false;
    }
    if (!any_outside) return poly;
    if (all_outside) return {};

    ConvexPolytope out;
    std::vector<Vec3> cap;  // intersection points lying on the clip plane

    auto push_vertex = [&out](const Vec3& v) {
        // Reuse a recent identical vertex if present; exact hits are common
        // because adjacent faces share edges.
        for (size_t i = out.vertices.size(); i-- > 0;) {
            const Vec3 d = out.vertices[i] - v;
            if (std::abs(d.x) <= kMergeEps && std::abs(d.y) <= kMergeEps &&
                std::abs(d.z) <= kMergeEps)
                return static_cast<int>(i);
        }
        out.vertices.push_back(v);
        return static_cast<int>(out.vertices.size() - 1);
    };

    for (const auto& face : poly.faces) {
        std::vector<int> clipped;
        const size_t n = face.size();
        for (size_t i = 0; i < n; ++i) {
            const int vi = face[i];
            const int vj = face[(i + 1) % n];
            const bool in_i = dist[vi] <= kPlaneEps;
            const bool in_j = dist[vj] <= kPlaneEps;
            if (in_i) clipped.push_back(push_vertex(poly.vertices[vi]));
            if (in_i != in_j) {
                Vec3 p = intersect_edge(poly.vertices[vi], poly.vertices[vj], dist[vi], dist[vj]);
                clipped.push_back(push_vertex(p));
                cap.push_back(p);
            }
        }
        // Drop duplicate consecutive indices left by near-plane vertices.
        std::vector<int> dedup;
        for (int idx : clipped) {
            if (dedup.empty() || dedup.back() != idx) dedup.push_back(idx);
        }
        while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
        if (dedup.size() >= 3) out.faces.push_back(std::move(dedup));
    }

    // Build the cap face on the clip plane, wound CCW about +normal so the
    // outward normal points out of the kept half-space.
    if (cap.size() >= 3) {
        Vec3 centroid{};
        for (const Vec3& p : cap) centroid = centroid + p;
        centroid = centroid * (1.0 / static_cast<double>(cap.size()));

        // In-plane basis (u, v) with u x v = normal.
        Vec3 axis = std::abs(hs.normal.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 u = cross(axis, hs.normal);
        u = u * (1.0 / norm(u));
        Vec3 v = cross(hs.normal, u);

        std::vector<std::pair<double, Vec3>> by_angle;
        by_angle.reserve(cap.size());
        for (const Vec3& p : cap) {
            Vec3 d = p - centroid;
            by_angle.emplace_back(std::atan2(dot(d, v), dot(d, u)), p);
        }
        std::sort(by_angle.begin(), by_angle.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::vector<int> cap_face;
        for (const auto& [angle, p] : by_angle) {
            int idx = push_vertex(p);
            if (cap_face.empty() || cap_face.back() != idx) cap_face.push_back(idx);
        }
        while (cap_face.size() > 1 && cap_face.front() == cap_face.back()) cap_face.pop_back();
        if (cap_face.size() >= 3) out.faces.push_back(std::move(cap_face));
    }

    if (out.faces.empty()) return {};
    return out;
}

double polytope_volume(const ConvexPolytope& poly) {
    if (poly.empty() || poly.faces.empty()) return 0.0;

    Vec3 g{};
    for (const Vec3& v : poly.vertices) g = g + v;
    g = g * (1.0 / static_cast<double>(poly.vertices.size()));

    double six_v = 0.0;
    for (const auto& face : poly.faces) {
        const Vec3 a = poly.vertices[face[0]] - g;
        for (size_t i = 1; i + 1 < face.size(); ++i) {
            const Vec3 b = poly.vertices[face[i]] - g;
            const Vec3 c = poly.vertices[face[i + 1]] - g;
            six_v += dot(a, cross(b, c));
        }
    }
    double vol = six_v / 6.0;
    return vol < kVolumeEps ? 0.0 : vol;
}

double intersection_volume(const OrientedBox3D& a, const OrientedBox3D& b) {
    const double va = box_volume(a);
    const double vb = box_volume(b);
    if (va <= 0.0 || vb <= 0.0) return 0.0;

    ConvexPolytope poly = polytope_from_box(a);
    for (const HalfSpace& hs : box_half_spaces(b)) {
        poly = clip_polytope(poly, hs);
        if (poly.empty()) return 0.0;
    }
    return std::clamp(polytope_volume(poly), 0.0, std::min(va, vb));
}

double iou_3d(const OrientedBox3D& a, const OrientedBox3D& b) {
    const double inter = intersection_volume(a, b);
    const double uni = box_volume(a) + box_volume(b) - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

}  // namespace scene3d
