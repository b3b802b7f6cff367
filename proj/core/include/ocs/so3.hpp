#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace ocs {

// ---------------------------------------------------------------------------
// Vec3
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    static constexpr Vec3 zero() { return {0.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_x() { return {1.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_y() { return {0.0, 1.0, 0.0}; }
    static constexpr Vec3 unit_z() { return {0.0, 0.0, 1.0}; }
};

constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
constexpr Vec3 operator*(const Vec3& v, double s) { return s * v; }
constexpr Vec3 operator/(const Vec3& v, double s) { return {v.x / s, v.y / s, v.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }
inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// ---------------------------------------------------------------------------
// Mat3 (row-major)
// ---------------------------------------------------------------------------

struct Mat3 {
    std::array<double, 9> a{};

    double operator()(int i, int j) const { return a[3 * i + j]; }
    double& operator()(int i, int j) { return a[3 * i + j]; }

    static Mat3 identity();
    static Mat3 diagonal(double xx, double yy, double zz);
    // v * v^T
    static Mat3 outer(const Vec3& u, const Vec3& v);
};

Mat3 operator+(const Mat3& m, const Mat3& n);
Mat3 operator*(double s, const Mat3& m);
Vec3 operator*(const Mat3& m, const Vec3& v);
Mat3 operator*(const Mat3& m, const Mat3& n);
Mat3 transpose(const Mat3& m);
double determinant(const Mat3& m);
Mat3 inverse(const Mat3& m);

// Largest eigenvalue of a symmetric 3x3 matrix (analytic).
double max_eigenvalue_symmetric(const Mat3& m);

// ---------------------------------------------------------------------------
// InertiaTensor: symmetric positive-definite 3x3, kg m^2
// ---------------------------------------------------------------------------

class InertiaTensor {
public:
    // Validates symmetry (1e-12 absolute on the off-diagonal mismatch,
    // scaled by the largest entry) and positive definiteness.
    explicit InertiaTensor(const Mat3& m);
    static InertiaTensor diagonal(double xx, double yy, double zz);

    const Mat3& matrix() const { return m_; }
    Vec3 apply(const Vec3& v) const { return m_ * v; }
    Mat3 inverse_matrix() const { return inverse(m_); }
    double xx() const { return m_(0, 0); }
    double yy() const { return m_(1, 1); }
    double zz() const { return m_(2, 2); }

private:
    Mat3 m_;
};

// ---------------------------------------------------------------------------
// Quaternion
//
// Hamilton convention, scalar-first (w, x, y, z). A state quaternion maps
// body-frame vectors into the world frame (passive body-to-world rotation):
// v_world = rotate_world_from_body(q, v_body). Attitude kinematics use the
// body-frame angular velocity: qdot = 0.5 * q * (0, omega).
// ---------------------------------------------------------------------------

struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static constexpr Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }
};

double norm(const Quaternion& q);
Quaternion normalized(const Quaternion& q);
Quaternion conjugate(const Quaternion& q);
bool is_finite(const Quaternion& q);

// Representative of the double cover with w >= 0. When w is (numerically)
// zero the rotation angle is pi and q, -q are equally valid; the sign is then
// fixed so that the largest-magnitude vector component is positive, which
// keeps downstream axis extraction deterministic.
Quaternion canonicalized(const Quaternion& q);

// Hamilton product, renormalized.
Quaternion operator*(const Quaternion& a, const Quaternion& b);

Quaternion from_axis_angle(const Vec3& axis, double angle);

// Exponential map: rotation vector (axis * angle, rad) -> unit quaternion.
Quaternion quat_exp(const Vec3& rotation_vector);

// Logarithm map: unit quaternion -> rotation vector in [0, pi], using the
// canonical (w >= 0) representative.
Vec3 quat_log(const Quaternion& q);

// v expressed in the world frame; preserves the norm.
Vec3 rotate_world_from_body(const Quaternion& q, const Vec3& v_body);
Vec3 rotate_body_from_world(const Quaternion& q, const Vec3& v_world);

Mat3 to_rotation_matrix(const Quaternion& q);

// Advance attitude by dt under constant body-frame angular velocity.
// Exact for constant omega (exponential-map step), renormalized.
Quaternion integrate_attitude(const Quaternion& q, const Vec3& omega_body, double dt);

// Body-frame rotation vector carrying q onto q_des:
// log(conj(q) * q_des), canonical representative. Zero iff q and q_des
// denote the same rotation.
Vec3 attitude_error(const Quaternion& q_des, const Quaternion& q);

// ZYX (yaw-pitch-roll) Euler angles, used only at the harness boundary.
Quaternion from_rpy(double roll, double pitch, double yaw);
Vec3 to_rpy(const Quaternion& q);

}  // namespace ocs
