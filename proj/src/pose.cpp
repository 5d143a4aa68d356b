#include "scene3d/pose.hpp"

#include <stdexcept>

namespace scene3d {

Pose compose(const Pose& a, const Pose& b) {
    return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Pose invert(const Pose& p) {
    Mat3 rt = p.rotation.transposed();
    return {rt, -(rt * p.translation)};
}

std::vector<Pose> rebase_to_first(const std::vector<Pose>& world_from_camera) {
    if (world_from_camera.empty())
        throw std::invalid_argument("rebase_to_first: empty pose list");
    const Pose inv0 = invert(world_from_camera[0]);
    std::vector<Pose> out;
    out.reserve(world_from_camera.size());
    for (const Pose& p : world_from_camera) out.push_back(compose(inv0, p));
    return out;
}

OrientedBox3D transform_box(const OrientedBox3D& box, const Pose& pose) {
    OrientedBox3D out;
    out.center = pose.apply(box.center);
    out.size = box.size;
    out.angles = euler_from_rotation(pose.rotation * box_rotation(box));
    return out;
}

}  // namespace scene3d
