#pragma once

#include <vector>

#include "scene3d/geometry.hpp"

namespace scene3d {

// Convex polytope as a vertex list plus outward-wound planar faces
// (each face a CCW index loop when seen from outside).
struct ConvexPolytope {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;

    bool empty() const { return vertices.size() < 4; }
};

// Half-space n·x <= offset. |n| need not be 1 for construction, but the
// clipping tolerance assumes unit normals.
struct HalfSpace {
    Vec3 normal;
    double offset;
};

ConvexPolytope polytope_from_box(const OrientedBox3D& box);
std::array<HalfSpace, 6> box_half_spaces(const OrientedBox3D& box);

// Clips to the kept side n·x <= offset. Vertices within 1e-12 m of the
// plane count as inside. Returns an empty polytope when nothing survives.
ConvexPolytope clip_polytope(const ConvexPolytope& poly, const HalfSpace& hs);

// Divergence-theorem volume over outward-wound faces. Values below
// 1e-15 m^3 collapse to 0.
double polytope_volume(const ConvexPolytope& poly);

// Volume of a ∩ b by clipping a's corner polytope against b's six
// half-spaces. Degenerate boxes give 0.
double intersection_volume(const OrientedBox3D& a, const OrientedBox3D& b);

// inter / (vol(a) + vol(b) - inter); 0 when the union volume is 0.
double iou_3d(const OrientedBox3D& a, const OrientedBox3D& b);

}  // namespace scene3d
