#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "trunkload/inverse_dynamics.hpp"
#include "trunkload/kinematics.hpp"

using namespace trunkload;
using trunkload::test::default_model;

namespace {

Eigen::VectorXd random_q(const Model& m, test::Rng& rng, double span) {
    Eigen::VectorXd q(m.coordinate_count());
    for (auto& v : q) v = rng.uniform(-span, span);
    return q;
}

std::vector<ExternalLoad> random_loads(const Model& m, test::Rng& rng, int count) {
    std::vector<ExternalLoad> out;
    for (int k = 0; k < count; ++k) {
        const auto s = 1 + static_cast<std::size_t>(rng.next() % (m.segments.size() - 1));
        out.push_back({m.segments[s].name, Vec3(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)),
                       Vec3(rng.uniform(-300, 300), rng.uniform(-300, 300), rng.uniform(-300, 300)),
                       Vec3(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20))});
    }
    return out;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("nothing in, nothing out") {
    Model m = default_model();
    m.gravity = Vec3::Zero();
    const auto tau = inverse_dynamics(m, Posture::zero(m), {});
    CHECK(tau.tau.size() == static_cast<Eigen::Index>(m.coordinate_count()));
    CHECK(max_abs(tau.tau) == 0.0);
}

TEST_CASE("horizontal pendulum holds m g l") {
    const Model m = test::pendulum(Vec3(0.5, 0.0, 0.0));
    const auto tau = inverse_dynamics(m, Posture::zero(m), {});
    const double expected = 2.0 * 9.81 * 0.5;
    CHECK(std::abs(std::abs(tau.tau[0]) - expected) <= 1e-9 * expected);
    // Gravity pulls the bob down (negative about +z); the joint must push back.
    CHECK(tau.tau[0] > 0.0);
}

TEST_CASE("hanging pendulum needs no torque") {
    const Model m = test::pendulum(Vec3(0.0, -0.5, 0.0));
    CHECK(std::abs(inverse_dynamics(m, Posture::zero(m), {}).tau[0]) < 1e-12);
    const Model tilted = test::pendulum(Vec3(0.5, 0.0, 0.0));
    Eigen::VectorXd q(1);
    q << -std::numbers::pi / 2.0;
    CHECK(std::abs(inverse_dynamics(tilted, Posture::at(q), {}).tau[0]) < 1e-12);
}

TEST_CASE("pendulum torque follows m g l cos q") {
    const Model m = test::pendulum(Vec3(0.5, 0.0, 0.0));
    for (double q = -3.0; q <= 3.0; q += 0.25) {
        Eigen::VectorXd qv(1);
        qv << q;
        const double expected = 2.0 * 9.81 * 0.5 * std::cos(q);
        CHECK(std::abs(inverse_dynamics(m, Posture::at(qv), {}).tau[0] - expected) < 1e-12);
    }
}

TEST_CASE("pendulum dynamics: inertial and centripetal terms") {
    Model m = test::pendulum(Vec3(0.5, 0.0, 0.0), Vec3::Zero());
    Posture p = Posture::zero(m);
    p.qddot[0] = 3.0;
    p.qdot[0] = 4.0;
    // Point mass: tau = m l^2 qddot; the centripetal force passes through the axis.
    CHECK(inverse_dynamics(m, p, {}).tau[0] == doctest::Approx(2.0 * 0.25 * 3.0).epsilon(1e-12));
}

TEST_CASE("external force on the pendulum") {
    const Model m = test::pendulum(Vec3(0.5, 0.0, 0.0), Vec3::Zero());
    const ExternalLoad push{"bob", Vec3(1.0, 0.0, 0.0), Vec3(0.0, 10.0, 0.0), Vec3::Zero()};
    // 10 N upward at 1 m: the joint must supply -10 N·m to hold still.
    CHECK(inverse_dynamics(m, Posture::zero(m), std::vector{push}).tau[0] == doctest::Approx(-10.0).epsilon(1e-12));
    const ExternalLoad unknown{"nope", Vec3::Zero(), Vec3::UnitY(), Vec3::Zero()};
    CHECK_THROWS_AS(inverse_dynamics(m, Posture::zero(m), std::vector{unknown}), UnknownEntity);
}

TEST_CASE("dimension mismatch") {
    const Model& m = default_model();
    CHECK_THROWS_AS(inverse_dynamics(m, Posture::at(Eigen::VectorXd::Zero(2)), {}), DimensionError);
}

TEST_CASE("property: linearity in loads") {
    const Model& m = default_model();
    test::Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        Posture p = Posture::at(random_q(m, rng, 0.5));
        for (auto& v : p.qdot) v = rng.uniform(-1, 1);
        for (auto& v : p.qddot) v = rng.uniform(-2, 2);
        const auto a = random_loads(m, rng, 2);
        const auto b = random_loads(m, rng, 3);
        std::vector<ExternalLoad> ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        const auto ta = inverse_dynamics(m, p, a).tau;
        const auto tb = inverse_dynamics(m, p, b).tau;
        const auto tab = inverse_dynamics(m, p, ab).tau;
        const auto t0 = inverse_dynamics(m, p, {}).tau;
        const double scale = std::max(1.0, max_abs(tab));
        CHECK(max_abs(tab - (ta + tb - t0)) <= 1e-9 * scale);
    }
}

TEST_CASE("property: static torque scales with gravity") {
    const Model& base = default_model();
    test::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = Posture::at(random_q(base, rng, 0.5));
        const double k = rng.uniform(0.1, 3.0);
        Model scaled = base;
        scaled.gravity = k * base.gravity;
        const auto t1 = inverse_dynamics(base, p, {}).tau;
        const auto tk = inverse_dynamics(scaled, p, {}).tau;
        CHECK(max_abs(tk - k * t1) <= 1e-9 * std::max(1.0, max_abs(tk)));
    }
}

TEST_CASE("property: mirrored posture and loads give mirrored torques") {
    const Model& m = default_model();
    const auto map = mirror_map(m);
    test::Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const auto q = random_q(m, rng, 0.4);
        const auto loads = random_loads(m, rng, 3);
        Eigen::VectorXd qm(q.size());
        for (std::size_t j = 0; j < m.coordinate_count(); ++j) {
            qm[static_cast<Eigen::Index>(map.partner[j])] = map.sign[j] * q[static_cast<Eigen::Index>(j)];
        }
        std::vector<ExternalLoad> mirrored;
        for (const auto& l : loads) {
            mirrored.push_back({mirror_name(l.segment), mirror_point(l.point), mirror_point(l.force), mirror_axial(l.torque)});
        }
        const auto t = inverse_dynamics(m, Posture::at(q), loads).tau;
        const auto tm = inverse_dynamics(m, Posture::at(qm), mirrored).tau;
        double worst = 0.0;
        for (std::size_t j = 0; j < m.coordinate_count(); ++j) {
            worst = std::max(worst, std::abs(tm[static_cast<Eigen::Index>(map.partner[j])] -
                                             map.sign[j] * t[static_cast<Eigen::Index>(j)]));
        }
        CHECK(worst <= 1e-9 * std::max(1.0, max_abs(t)));
    }
}

TEST_CASE("mirror symmetric posture: lateral torques vanish, sagittal ones match") {
    const Model& m = default_model();
    const auto t = inverse_dynamics(m, Posture::zero(m), {}).tau;
    CHECK(std::abs(t[static_cast<Eigen::Index>(m.coordinate_index("lumbar_bending"))]) < 1e-9);
    CHECK(std::abs(t[static_cast<Eigen::Index>(m.coordinate_index("lumbar_rotation"))]) < 1e-9);
    CHECK(t[static_cast<Eigen::Index>(m.coordinate_index("hip_flexion_l"))] ==
          doctest::Approx(t[static_cast<Eigen::Index>(m.coordinate_index("hip_flexion_r"))]).epsilon(1e-12));
}
