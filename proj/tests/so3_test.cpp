#include "ocs/so3.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ocs;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent rotation-matrix oracle: Rodrigues' formula, built without any
// quaternion machinery.
Mat3 rodrigues(const Vec3& axis_unit, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    const double x = axis_unit.x, y = axis_unit.y, z = axis_unit.z;
    Mat3 k;  // skew(axis)
    k(0, 1) = -z; k(0, 2) = y;
    k(1, 0) = z;  k(1, 2) = -x;
    k(2, 0) = -y; k(2, 1) = x;
    return Mat3::identity() + s * k + (1.0 - c) * (k * k);
}

Quaternion random_unit_quaternion(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    return normalized({gauss(rng), gauss(rng), gauss(rng), gauss(rng)});
}

Vec3 random_vec3(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
    double m = 0.0;
    for (int i = 0; i < 9; ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

}  // namespace

TEST(QuaternionMultiply, IdentityIsNeutral) {
    const Quaternion q = from_axis_angle({0.3, -0.5, 0.8}, 1.2);
    const Quaternion r = Quaternion::identity() * q;
    EXPECT_NEAR(r.w, q.w, 1e-15);
    EXPECT_NEAR(r.x, q.x, 1e-15);
    EXPECT_NEAR(r.y, q.y, 1e-15);
    EXPECT_NEAR(r.z, q.z, 1e-15);
}

TEST(QuaternionMultiply, ConjugateIsInverse) {
    const Quaternion q = from_axis_angle({1.0, 2.0, -0.5}, 0.9);
    const Quaternion r = q * conjugate(q);
    EXPECT_NEAR(r.w, 1.0, 1e-15);
    EXPECT_NEAR(std::abs(r.x) + std::abs(r.y) + std::abs(r.z), 0.0, 1e-15);
}

TEST(QuaternionMultiply, ComposedRotationMatchesMatrixOracle) {
    // Two 90 deg rotations about z compose to 180 deg about z; verify by
    // composing the independently built rotation matrices.
    const Quaternion qz90 = from_axis_angle(Vec3::unit_z(), kPi / 2.0);
    const Quaternion composed = qz90 * qz90;
    const Mat3 expected = rodrigues(Vec3::unit_z(), kPi / 2.0) * rodrigues(Vec3::unit_z(), kPi / 2.0);
    EXPECT_LT(max_abs_diff(to_rotation_matrix(composed), expected), 1e-14);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const Vec3 axis_a = normalized(random_vec3(rng, 1.0) + Vec3{0.1, 0.0, 0.0});
        const Vec3 axis_b = normalized(random_vec3(rng, 1.0) + Vec3{0.0, 0.1, 0.0});
        std::uniform_real_distribution<double> ang(-3.0, 3.0);
        const double a = ang(rng), b = ang(rng);
        const Quaternion q = from_axis_angle(axis_a, a) * from_axis_angle(axis_b, b);
        const Mat3 m = rodrigues(axis_a, a) * rodrigues(axis_b, b);
        EXPECT_LT(max_abs_diff(to_rotation_matrix(q), m), 1e-13);
    }
}

TEST(Rotate, IdentityLeavesVectorUnchanged) {
    const Vec3 v = rotate_world_from_body(Quaternion::identity(), {1.0, 2.0, 3.0});
    EXPECT_DOUBLE_EQ(v.x, 1.0);
    EXPECT_DOUBLE_EQ(v.y, 2.0);
    EXPECT_DOUBLE_EQ(v.z, 3.0);
}

TEST(Rotate, NinetyAboutZPermutesAxes) {
    const Quaternion q = from_axis_angle(Vec3::unit_z(), kPi / 2.0);
    const Vec3 v = rotate_world_from_body(q, Vec3::unit_x());
    EXPECT_NEAR(v.x, 0.0, 1e-15);
    EXPECT_NEAR(v.y, 1.0, 1e-15);
    EXPECT_NEAR(v.z, 0.0, 1e-15);
}

TEST(Rotate, MatchesMatrixProductOnRandomInputs) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const Quaternion q = random_unit_quaternion(rng);
        const Vec3 v = random_vec3(rng, 10.0);
        const Vec3 got = rotate_world_from_body(q, v);
        const Vec3 want = to_rotation_matrix(q) * v;
        EXPECT_LT(norm(got - want), 1e-12 * std::max(1.0, norm(v)));
    }
}

TEST(Rotate, IsIsometry) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const Quaternion q = random_unit_quaternion(rng);
        const Vec3 v = random_vec3(rng, 100.0);
        EXPECT_NEAR(norm(rotate_world_from_body(q, v)), norm(v), 1e-12 * std::max(1.0, norm(v)));
    }
}

TEST(Rotate, BodyFromWorldInvertsWorldFromBody) {
    std::mt19937_64 rng(17);
    const Quaternion q = random_unit_quaternion(rng);
    const Vec3 v = random_vec3(rng, 5.0);
    const Vec3 back = rotate_body_from_world(q, rotate_world_from_body(q, v));
    EXPECT_LT(norm(back - v), 1e-13);
}

TEST(IntegrateAttitude, ZeroRateIsIdentityStep) {
    const Quaternion q = from_axis_angle({0.2, 0.9, -0.1}, 0.7);
    const Quaternion r = integrate_attitude(q, Vec3::zero(), 0.5);
    EXPECT_NEAR(r.w, q.w, 1e-15);
    EXPECT_NEAR(r.x, q.x, 1e-15);
}

TEST(IntegrateAttitude, ConstantPitchRateForOneSecond) {
    const Quaternion r = integrate_attitude(Quaternion::identity(), {0.0, kPi, 0.0}, 1.0);
    // 180 deg pitch: (0, 0, 1, 0) up to sign.
    EXPECT_NEAR(std::abs(r.y), 1.0, 1e-12);
    EXPECT_NEAR(r.w, 0.0, 1e-12);
    EXPECT_NEAR(r.x, 0.0, 1e-15);
    EXPECT_NEAR(r.z, 0.0, 1e-15);
}

TEST(IntegrateAttitude, StepSubdivisionAgreesForConstantRate) {
    const Vec3 omega{0.7, -1.3, 2.1};
    const double total = 1.8;
    for (int pieces : {1, 7, 100, 1000}) {
        Quaternion q = Quaternion::identity();
        for (int i = 0; i < pieces; ++i) q = integrate_attitude(q, omega, total / pieces);
        const Quaternion single = integrate_attitude(Quaternion::identity(), omega, total);
        EXPECT_LT(norm(attitude_error(single, q)), 1e-9) << "pieces = " << pieces;
    }
}

TEST(IntegrateAttitude, MatchesClosedFormAxisAngle) {
    const Vec3 omega{0.4, 0.5, -0.6};
    const double T = 2.0;
    Quaternion q = Quaternion::identity();
    const int n = 1000;
    for (int i = 0; i < n; ++i) q = integrate_attitude(q, omega, T / n);
    const Quaternion closed = from_axis_angle(normalized(omega), norm(omega) * T);
    EXPECT_LT(norm(attitude_error(closed, q)), 1e-9);
}

TEST(AttitudeError, ZeroForEqualAttitudes) {
    const Quaternion q = from_axis_angle({1.0, 1.0, 0.0}, 0.8);
    EXPECT_DOUBLE_EQ(norm(attitude_error(q, q)), 0.0);
}

TEST(AttitudeError, SingleAxisPitchCase) {
    const Quaternion q_des = from_axis_angle(Vec3::unit_y(), 30.0 * kPi / 180.0);
    const Vec3 e = attitude_error(q_des, Quaternion::identity());
    EXPECT_NEAR(e.x, 0.0, 1e-15);
    EXPECT_NEAR(e.y, 0.5235987755982988, 1e-12);
    EXPECT_NEAR(e.z, 0.0, 1e-15);
}

TEST(AttitudeError, DoubleCoverInvariance) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const Quaternion q_des = random_unit_quaternion(rng);
        const Quaternion q = random_unit_quaternion(rng);
        const Quaternion q_neg{-q.w, -q.x, -q.y, -q.z};
        const Vec3 a = attitude_error(q_des, q);
        const Vec3 b = attitude_error(q_des, q_neg);
        EXPECT_LT(norm(a - b), 1e-12);
    }
}

TEST(AttitudeError, ZeroIffSameRotation) {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        const Quaternion q = random_unit_quaternion(rng);
        EXPECT_LT(norm(attitude_error(q, q)), 1e-12);
        // A perturbed attitude must give a nonzero error of matching size.
        const double delta = 1e-3;
        const Quaternion q2 = q * from_axis_angle(Vec3::unit_x(), delta);
        EXPECT_NEAR(norm(attitude_error(q, q2)), delta, 1e-9);
    }
}

TEST(AttitudeError, PiAngleIsDeterministic) {
    // 180 deg about an axis with a dominant component: the log must pick the
    // representative with that component positive, whichever sign comes in.
    const Vec3 axis = normalized(Vec3{0.2, -0.9, 0.1});
    const Quaternion q_des = from_axis_angle(axis, kPi);
    const Quaternion q_des_neg{-q_des.w, -q_des.x, -q_des.y, -q_des.z};
    const Vec3 a = attitude_error(q_des, Quaternion::identity());
    const Vec3 b = attitude_error(q_des_neg, Quaternion::identity());
    EXPECT_LT(norm(a - b), 1e-12);
    EXPECT_NEAR(norm(a), kPi, 1e-12);
    EXPECT_GT(a.y, 0.0);  // dominant component forced positive
}

TEST(QuaternionNorm, StaysUnitOverMillionOperations) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(-0.1, 0.1);
    Quaternion q = Quaternion::identity();
    const Quaternion step1 = from_axis_angle({1.0, 0.2, 0.0}, 0.013);
    const Quaternion step2 = from_axis_angle({0.0, 1.0, -0.4}, -0.007);
    for (int i = 0; i < 500000; ++i) {
        q = q * step1;
        q = integrate_attitude(q, {0.3, -0.2, angle(rng)}, 1e-3);
        q = q * step2;
    }
    EXPECT_LT(std::abs(norm(q) - 1.0), 1e-9);
}

TEST(Rpy, RoundTripInsideGimbalRange) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> r(-2.5, 2.5), p(-1.4, 1.4);
    for (int i = 0; i < 100; ++i) {
        const double roll = r(rng), pitch = p(rng), yaw = r(rng);
        const Vec3 back = to_rpy(from_rpy(roll, pitch, yaw));
        EXPECT_NEAR(back.x, roll, 1e-12);
        EXPECT_NEAR(back.y, pitch, 1e-12);
        EXPECT_NEAR(back.z, yaw, 1e-12);
    }
}

TEST(InertiaTensorType, RejectsAsymmetricAndIndefinite) {
    Mat3 asym = Mat3::diagonal(1.0, 2.0, 3.0);
    asym(0, 1) = 0.5;  // no matching (1,0) entry
    EXPECT_THROW(InertiaTensor{asym}, std::domain_error);
    EXPECT_THROW(InertiaTensor::diagonal(1.0, -2.0, 3.0), std::domain_error);
    EXPECT_THROW(InertiaTensor::diagonal(0.0, 2.0, 3.0), std::domain_error);
    EXPECT_NO_THROW(InertiaTensor::diagonal(1e-5, 2e-5, 3e-5));
}

TEST(Mat3Ops, InverseAndMaxEigenvalue) {
    Mat3 m = Mat3::diagonal(2.0, 5.0, 1.0);
    m(0, 1) = m(1, 0) = 0.3;
    const Mat3 inv = inverse(m);
    EXPECT_LT(max_abs_diff(m * inv, Mat3::identity()), 1e-14);
    // Largest eigenvalue of [[2, .3], [.3, 5]] block is (7 + sqrt(9.36)) / 2.
    EXPECT_NEAR(max_eigenvalue_symmetric(m), (7.0 + std::sqrt(9.0 + 4 * 0.09)) / 2.0, 1e-12);
}
