#pragma once

#include <vector>

#include "scene3d/geometry.hpp"

namespace scene3d {

// SE(3) rigid transform. The single stored convention for camera extrinsics
// is world_from_camera: apply() maps camera-frame points to world points.
struct Pose {
    Mat3 rotation;
    Vec3 translation;

    static Pose identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

Pose compose(const Pose& a, const Pose& b);  // (a ∘ b)(x) = a(b(x))
Pose invert(const Pose& p);

// Given world_from_camera poses, returns camera0_from_camera poses:
// element i = invert(poses[0]) ∘ poses[i]; element 0 is the identity.
// Throws std::invalid_argument on an empty list.
std::vector<Pose> rebase_to_first(const std::vector<Pose>& world_from_camera);

// Rigidly moves a box: center' = R c + t, rotation' = R * R_box re-decomposed
// into (yaw, pitch, roll), size unchanged.
OrientedBox3D transform_box(const OrientedBox3D& box, const Pose& pose);

}  // namespace scene3d
