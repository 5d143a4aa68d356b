#pragma once

#include <array>
#include <cmath>

namespace scene3d {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline bool finite(const Vec3& a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Row-major 3x3 matrix. Rotation matrices are plain Mat3 values; validity
// (orthonormal, det = 1) is checked where inputs cross a trust boundary.
struct Mat3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 identity() { return Mat3{}; }

    Vec3 row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
    Vec3 col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
        return r;
    }
    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }
    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
};

// Max absolute entry of R^T R - I.
double orthonormality_error(const Mat3& r);
bool is_rotation(const Mat3& r, double tol = 1e-9);

// Nearest rotation by iterative polar decomposition. Requires det > 0 and
// a well-conditioned input; intended for repairing float32 extrinsics noise.
Mat3 nearest_rotation(const Mat3& r);

// 9-DoF oriented box: center (x, y, z) in meters, size (w, h, d) in meters,
// angles (yaw, pitch, roll) in radians. Degenerate sizes (a zero component)
// are legal and give volume 0.
struct OrientedBox3D {
    Vec3 center;
    Vec3 size;
    Vec3 angles;  // (yaw, pitch, roll)
};

bool box_is_valid(const OrientedBox3D& box);

// R = Rz(yaw) * Ry(pitch) * Rx(roll) (intrinsic yaw-pitch-roll).
// Throws std::invalid_argument on non-finite input.
Mat3 rotation_from_euler(double yaw, double pitch, double roll);

// Inverse of rotation_from_euler. At gimbal lock (|R(2,0)| >= 1 - 1e-9)
// roll is set to 0 and the residual rotation folds into yaw.
Vec3 euler_from_rotation(const Mat3& r);

inline Mat3 box_rotation(const OrientedBox3D& box) {
    return rotation_from_euler(box.angles.x, box.angles.y, box.angles.z);
}

// The 8 corners, center + R * (±w/2, ±h/2, ±d/2). Corner i has local sign
// (+ if bit set, - otherwise) for x in bit 0, y in bit 1, z in bit 2:
//   0:(-,-,-) 1:(+,-,-) 2:(-,+,-) 3:(+,+,-) 4:(-,-,+) 5:(+,-,+) 6:(-,+,+) 7:(+,+,+)
std::array<Vec3, 8> box_corners(const OrientedBox3D& box);

double box_volume(const OrientedBox3D& box);

}  // namespace scene3d
