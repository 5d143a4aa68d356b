#include "scene3d/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace scene3d {

double orthonormality_error(const Mat3& r) {
    Mat3 g = r.transposed() * r;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(g.m[i][j] - target));
        }
    return worst;
}

bool is_rotation(const Mat3& r, double tol) {
    return orthonormality_error(r) <= tol && std::abs(r.det() - 1.0) <= tol;
}

static Mat3 inverse(const Mat3& a) {
    double d = a.det();
    if (std::abs(d) < 1e-30) throw std::invalid_argument("singular matrix");
    Mat3 r;
    r.m[0][0] = (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) / d;
    r.m[0][1] = (a.m[0][2] * a.m[2][1] - a.m[0][1] * a.m[2][2]) / d;
    r.m[0][2] = (a.m[0][1] * a.m[1][2] - a.m[0][2] * a.m[1][1]) / d;
    r.m[1][0] = (a.m[1][2] * a.m[2][0] - a.m[1][0] * a.m[2][2]) / d;
    r.m[1][1] = (a.m[0][0] * a.m[2][2] - a.m[0][2] * a.m[2][0]) / d;
    r.m[1][2] = (a.m[0][2] * a.m[1][0] - a.m[0][0] * a.m[1][2]) / d;
    r.m[2][0] = (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]) / d;
    r.m[2][1] = (a.m[0][1] * a.m[2][0] - a.m[0][0] * a.m[2][1]) / d;
    r.m[2][2] = (a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0]) / d;
    return r;
}

Mat3 nearest_rotation(const Mat3& r) {
    if (r.det() <= 0.0) throw std::invalid_argument("nearest_rotation: det must be positive");
    // Higham iteration: X <- (X + X^-T) / 2 converges to the polar factor.
    Mat3 x = r;
    for (int iter = 0; iter < 32; ++iter) {
        Mat3 xit = inverse(x).transposed();
        Mat3 next;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) next.m[i][j] = 0.5 * (x.m[i][j] + xit.m[i][j]);
        double delta = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) delta = std::max(delta, std::abs(next.m[i][j] - x.m[i][j]));
        x = next;
        if (delta < 1e-15) break;
    }
    return x;
}

bool box_is_valid(const OrientedBox3D& box) {
    return finite(box.center) && finite(box.size) && finite(box.angles) && box.size.x >= 0.0 &&
           box.size.y >= 0.0 && box.size.z >= 0.0;
}

Mat3 rotation_from_euler(double yaw, double pitch, double roll) {
    if (!std::isfinite(yaw) || !std::isfinite(pitch) || !std::isfinite(roll))
        throw std::invalid_argument("rotation_from_euler: non-finite angle");
    const double cy = std::cos(yaw), sy = std::sin(yaw);
    const double cp = std::cos(pitch), sp = std::sin(pitch);
    const double cr = std::cos(roll), sr = std::sin(roll);
    Mat3 r;
    r.m[0][0] = cy * cp;
    r.m[0][1] = cy * sp * sr - sy * cr;
    r.m[0][2] = cy * sp * cr + sy * sr;
    r.m[1][0] = sy * cp;
    r.m[1][1] = sy * sp * sr + cy * cr;
    r.m[1][2] = sy * sp * cr - cy * sr;
    r.m[2][0] = -sp;
    r.m[2][1] = cp * sr;
    r.m[2][2] = cp * cr;
    return r;
}

Vec3 euler_from_rotation(const Mat3& r) {
    const double s = -r.m[2][0];  // sin(pitch)
    if (std::abs(r.m[2][0]) >= 1.0 - 1e-9) {
        // Gimbal lock: roll := 0, remaining rotation folds into yaw.
        double pitch = (s > 0) ? M_PI / 2 : -M_PI / 2;
        double yaw = std::atan2(-r.m[0][1], r.m[1][1]);
        return {yaw, pitch, 0.0};
    }
    double pitch = std::asin(std::clamp(s, -1.0, 1.0));
    double yaw = std::atan2(r.m[1][0], r.m[0][0]);
    double roll = std::atan2(r.m[2][1], r.m[2][2]);
    return {yaw, pitch, roll};
}

std::array<Vec3, 8> box_corners(const OrientedBox3D& box) {
    const Mat3 r = box_rotation(box);
    const Vec3 h = box.size * 0.5;
    std::array<Vec3, 8> out;
    for (int i = 0; i < 8; ++i) {
        Vec3 local{(i & 1) ? h.x : -h.x, (i & 2) ? h.y : -h.y, (i & 4) ? h.z : -h.z};
        out[i] = box.center + r * local;
    }
    return out;
}

double box_volume(const OrientedBox3D& box) { return box.size.x * box.size.y * box.size.z; }

}  // namespace scene3d
