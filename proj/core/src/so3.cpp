#include "ocs/so3.hpp"

#include <algorithm>
#include <cmath>

namespace ocs {

// ---------------------------------------------------------------------------
// Mat3
// ---------------------------------------------------------------------------

Mat3 Mat3::identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
}

Mat3 Mat3::diagonal(double xx, double yy, double zz) {
    Mat3 m;
    m(0, 0) = xx;
    m(1, 1) = yy;
    m(2, 2) = zz;
    return m;
}

Mat3 Mat3::outer(const Vec3& u, const Vec3& v) {
    Mat3 m;
    const double ua[3] = {u.x, u.y, u.z};
    const double va[3] = {v.x, v.y, v.z};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = ua[i] * va[j];
    return m;
}

Mat3 operator+(const Mat3& m, const Mat3& n) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = m.a[i] + n.a[i];
    return r;
}

Mat3 operator*(double s, const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = s * m.a[i];
    return r;
}

Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

Mat3 operator*(const Mat3& m, const Mat3& n) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m(i, k) * n(k, j);
            r(i, j) = s;
        }
    return r;
}

Mat3 transpose(const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
    return r;
}

double determinant(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Mat3 inverse(const Mat3& m) {
    const double det = determinant(m);
    if (std::abs(det) < 1e-300) throw std::domain_error("Mat3: singular matrix");
    const double inv_det = 1.0 / det;
    Mat3 r;
    r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) * inv_det;
    r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) * inv_det;
    r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) * inv_det;
    r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) * inv_det;
    r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) * inv_det;
    r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) * inv_det;
    r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) * inv_det;
    r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) * inv_det;
    r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) * inv_det;
    return r;
}

double max_eigenvalue_symmetric(const Mat3& m) {
    // Trigonometric solution of the characteristic cubic for symmetric 3x3.
    const double q = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
    Mat3 b = m;
    b(0, 0) -= q;
    b(1, 1) -= q;
    b(2, 2) -= q;
    double p2 = 0.0;
    for (int i = 0; i < 9; ++i) p2 += b.a[i] * b.a[i];
    const double p = std::sqrt(p2 / 6.0);
    if (p < 1e-300) return q;  // scalar multiple of identity
    const Mat3 bn = (1.0 / p) * b;
    double r = determinant(bn) / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi);
}

// ---------------------------------------------------------------------------
// InertiaTensor
// ---------------------------------------------------------------------------

InertiaTensor::InertiaTensor(const Mat3& m) : m_(m) {
    double max_entry = 0.0;
    for (double v : m.a) max_entry = std::max(max_entry, std::abs(v));
    const double tol = 1e-12 * std::max(max_entry, 1.0);
    if (std::abs(m(0, 1) - m(1, 0)) > tol || std::abs(m(0, 2) - m(2, 0)) > tol ||
        std::abs(m(1, 2) - m(2, 1)) > tol) {
        throw std::domain_error("InertiaTensor: matrix is not symmetric");
    }
    // Sylvester's criterion on the leading principal minors.
    const double m1 = m(0, 0);
    const double m2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double m3 = determinant(m);
    if (!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0)) {
        throw std::domain_error("InertiaTensor: matrix is not positive definite");
    }
}

InertiaTensor InertiaTensor::diagonal(double xx, double yy, double zz) {
    return InertiaTensor(Mat3::diagonal(xx, yy, zz));
}

// ---------------------------------------------------------------------------
// Quaternion
// ---------------------------------------------------------------------------

double norm(const Quaternion& q) {
    return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

Quaternion normalized(const Quaternion& q) {
    const double n = norm(q);
    return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Quaternion conjugate(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

bool is_finite(const Quaternion& q) {
    return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z);
}

Quaternion canonicalized(const Quaternion& q) {
    constexpr double w_tol = 1e-12;
    if (q.w > w_tol) return q;
    if (q.w < -w_tol) return {-q.w, -q.x, -q.y, -q.z};
    // Angle is pi: pick the sign making the largest vector component positive.
    const double ax = std::abs(q.x), ay = std::abs(q.y), az = std::abs(q.z);
    double lead = q.x;
    if (ay > ax && ay >= az) lead = q.y;
    else if (az > ax && az > ay) lead = q.z;
    if (lead < 0.0) return {-q.w, -q.x, -q.y, -q.z};
    return q;
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    const Quaternion p{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                       a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                       a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                       a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    return normalized(p);
}

Quaternion from_axis_angle(const Vec3& axis, double angle) {
    return quat_exp(angle * normalized(axis));
}

Quaternion quat_exp(const Vec3& r) {
    const double angle = norm(r);
    double w, k;
    if (angle < 1e-8) {
        // sin(a/2)/a and cos(a/2) by series
        w = 1.0 - angle * angle / 8.0;
        k = 0.5 - angle * angle / 48.0;
    } else {
        w = std::cos(0.5 * angle);
        k = std::sin(0.5 * angle) / angle;
    }
    return normalized({w, k * r.x, k * r.y, k * r.z});
}

Vec3 quat_log(const Quaternion& q_in) {
    const Quaternion q = canonicalized(normalized(q_in));
    const Vec3 v{q.x, q.y, q.z};
    const double s = norm(v);
    if (s < 1e-9) {
        // Near identity: 2*atan2(s, w)/s expanded around s = 0.
        const double k = 2.0 / q.w * (1.0 - s * s / (3.0 * q.w * q.w));
        return k * v;
    }
    const double angle = 2.0 * std::atan2(s, q.w);
    return (angle / s) * v;
}

Vec3 rotate_world_from_body(const Quaternion& q, const Vec3& v) {
    const Vec3 u{q.x, q.y, q.z};
    const Vec3 t = 2.0 * cross(u, v);
    return v + q.w * t + cross(u, t);
}

Vec3 rotate_body_from_world(const Quaternion& q, const Vec3& v) {
    return rotate_world_from_body(conjugate(q), v);
}

Mat3 to_rotation_matrix(const Quaternion& q) {
    Mat3 m;
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    m(0, 0) = 1.0 - 2.0 * (y * y + z * z);
    m(0, 1) = 2.0 * (x * y - w * z);
    m(0, 2) = 2.0 * (x * z + w * y);
    m(1, 0) = 2.0 * (x * y + w * z);
    m(1, 1) = 1.0 - 2.0 * (x * x + z * z);
    m(1, 2) = 2.0 * (y * z - w * x);
    m(2, 0) = 2.0 * (x * z - w * y);
    m(2, 1) = 2.0 * (y * z + w * x);
    m(2, 2) = 1.0 - 2.0 * (x * x + y * y);
    return m;
}

Quaternion integrate_attitude(const Quaternion& q, const Vec3& omega_body, double dt) {
    return q * quat_exp(dt * omega_body);
}

Vec3 attitude_error(const Quaternion& q_des, const Quaternion& q) {
    return quat_log(conjugate(q) * q_des);
}

Quaternion from_rpy(double roll, double pitch, double yaw) {
    const Quaternion qz = from_axis_angle(Vec3::unit_z(), yaw);
    const Quaternion qy = from_axis_angle(Vec3::unit_y(), pitch);
    const Quaternion qx = from_axis_angle(Vec3::unit_x(), roll);
    return qz * qy * qx;
}

Vec3 to_rpy(const Quaternion& q) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    const double roll = std::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
    const double pitch = std::asin(std::clamp(2.0 * (w * y - z * x), -1.0, 1.0));
    const double yaw = std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
    return {roll, pitch, yaw};
}

}  // namespace ocs
