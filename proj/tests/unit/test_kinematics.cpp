#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "trunkload/kinematics.hpp"
#include "trunkload/model.hpp"

using namespace trunkload;
using trunkload::test::default_model;

namespace {

Model ground_path_model(std::vector<Vec3> points) {
    Model m;
    m.segments.push_back({"ground", 0.0, Vec3::Zero(), Mat3::Zero()});
    m.segments.push_back({"link", 1.0, Vec3::Zero(), Mat3::Identity()});
    JointDef j;
    j.name = "j";
    j.parent = "ground";
    j.child = "link";
    j.kind = JointKind::revolute;
    j.axes = {Vec3::UnitZ()};
    j.coordinates = {"j"};
    m.joints.push_back(j);
    m.groups.push_back({"g", AnatomicalGroup::other, 0});
    MuscleElement mu{"m", "g", Side::midline, {}, 10.0};
    for (const auto& p : points) mu.path.push_back({"ground", p});
    m.muscles.push_back(mu);
    m.rebuild();
    return m;
}

double closed_form_length(double q) { return std::sqrt(1.25 - std::sin(q)); }
double closed_form_arm(double q) { return std::cos(q) / (2.0 * closed_form_length(q)); }

}  // namespace

TEST_CASE("zero posture reproduces the reference configuration") {
    const Model& m = default_model();
    const auto frames = forward_kinematics(m, Posture::zero(m));
    CHECK(frames.segments.size() == m.segments.size());
    for (std::size_t s = 0; s < m.segments.size(); ++s) {
        CHECK((frames[s].rotation - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(frames[m.segment_index("pelvis")].translation.isApprox(Vec3(0.0, 0.95, 0.0)));
}

TEST_CASE("quarter turn about z maps (0.5, 0, 0) to (0, 0.5, 0)") {
    const Model m = test::pendulum(Vec3(0.5, 0.0, 0.0));
    Eigen::VectorXd q(1);
    q << std::numbers::pi / 2.0;
    const auto frames = forward_kinematics(m, q);
    const Vec3 p = frames[1].apply(Vec3(0.5, 0.0, 0.0));
    CHECK(std::abs(p.x() - 0.0) < 1e-12);
    CHECK(std::abs(p.y() - 0.5) < 1e-12);
    CHECK(std::abs(p.z()) < 1e-12);
}

TEST_CASE("ground stays at the identity for any posture") {
    const Model& m = default_model();
    test::Rng rng(7);
    for (int k = 0; k < 20; ++k) {
        Eigen::VectorXd q(m.coordinate_count());
        for (auto& v : q) v = rng.uniform(-1.0, 1.0);
        const auto frames = forward_kinematics(m, q);
        CHECK(frames[0].rotation == Mat3::Identity());
        CHECK(frames[0].translation == Vec3::Zero());
    }
}

TEST_CASE("posture dimension is checked") {
    const Model& m = default_model();
    CHECK_THROWS_AS(forward_kinematics(m, Eigen::VectorXd::Zero(3)), DimensionError);
    Posture p = Posture::zero(m);
    p.qdot.resize(2);
    CHECK_THROWS_AS(check_posture_dimension(m, p), DimensionError);
}

TEST_CASE("polyline lengths") {
    SUBCASE("two points") {
        const Model m = ground_path_model({Vec3(0, 0, 0), Vec3(1, 0, 0)});
        CHECK(muscle_length(m, Posture::zero(m), "m") == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("three points, 3-4-5 legs") {
        const Model m = ground_path_model({Vec3(0, 0, 0), Vec3(0.3, 0.4, 0), Vec3(0.6, 0.8, 0)});
        CHECK(muscle_length(m, Posture::zero(m), "m") == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("unknown muscle") {
        const Model m = ground_path_model({Vec3(0, 0, 0), Vec3(1, 0, 0)});
        CHECK_THROWS_AS(muscle_length(m, Posture::zero(m), "x"), UnknownEntity);
    }
}

TEST_CASE("hinge length and moment arm against the closed form") {
    const Model m = load_model(test::hinge_document());
    CHECK(std::abs(muscle_length(m, Posture::zero(m), "flexor") - std::sqrt(1.25)) < 1e-12);
    CHECK(moment_arm(m, Posture::zero(m), "flexor", "hinge") == doctest::Approx(0.4472136).epsilon(1e-4));
    for (double q = -1.2; q <= 1.2; q += 0.1) {
        Eigen::VectorXd qv(1);
        qv << q;
        const auto posture = Posture::at(qv);
        CHECK(std::abs(muscle_length(m, posture, "flexor") - closed_form_length(q)) < 1e-12);
        const double r = moment_arm(m, posture, "flexor", "hinge");
        CHECK(std::abs(r - closed_form_arm(q)) <= 1e-4 * std::abs(closed_form_arm(q)));
    }
}

TEST_CASE("moment arm vanishes without kinematic coupling") {
    const Model& m = default_model();
    const auto posture = Posture::zero(m);
    SUBCASE("all points on one segment") {
        const Model g = ground_path_model({Vec3(0, 0, 0), Vec3(0, 1, 0)});
        CHECK(moment_arm(g, Posture::zero(g), "m", "j") == 0.0);
    }
    SUBCASE("disjoint branch") {
        // A trunk muscle does not cross the knee.
        const auto& name = m.muscles[0].name;
        CHECK(moment_arm(m, posture, name, "knee_angle_l") == 0.0);
        CHECK(moment_arm(m, posture, name, "ankle_angle_r") == 0.0);
    }
    CHECK_THROWS_AS(moment_arm(m, posture, "nope", "knee_angle_l"), UnknownEntity);
    CHECK_THROWS_AS(moment_arm(m, posture, m.muscles[0].name, "nope"), UnknownEntity);
}

TEST_CASE("moment arm matrix matches single evaluations") {
    const Model& m = default_model();
    test::Rng rng(3);
    Eigen::VectorXd q(m.coordinate_count());
    for (auto& v : q) v = rng.uniform(-0.4, 0.4);
    const auto posture = Posture::at(q);
    const auto R = moment_arm_matrix(m, posture);
    REQUIRE(R.rows() == static_cast<Eigen::Index>(m.coordinate_count()));
    REQUIRE(R.cols() == static_cast<Eigen::Index>(m.muscles.size()));
    for (std::size_t j = 0; j < m.coordinate_count(); j += 3) {
        for (std::size_t i = 0; i < m.muscles.size(); i += 5) {
            CHECK(R(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) ==
                  moment_arm(m, posture, m.muscles[i].name, m.coordinates[j].name));
        }
    }
}

TEST_CASE("property: rigid translation leaves lengths and moment arms unchanged") {
    const Model& base = default_model();
    test::Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        Model shifted = base;
        const Vec3 offset(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
        shifted.joints[*shifted.find_joint("pelvis")].anchor_parent += offset;
        shifted.rebuild();
        Eigen::VectorXd q(base.coordinate_count());
        for (auto& v : q) v = rng.uniform(-0.5, 0.5);
        const auto posture = Posture::at(q);
        const auto fa = forward_kinematics(base, posture);
        const auto fb = forward_kinematics(shifted, posture);
        for (std::size_t i = 0; i < base.muscles.size(); ++i) {
            CHECK(std::abs(muscle_length(base, fa, i) - muscle_length(shifted, fb, i)) <= 1e-12);
        }
        const auto ra = moment_arm_matrix(base, posture);
        const auto rb = moment_arm_matrix(shifted, posture);
        CHECK((ra - rb).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("property: moment arms are mirror symmetric") {
    const Model& m = default_model();
    const auto map = mirror_map(m);
    test::Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd q(m.coordinate_count());
        for (auto& v : q) v = rng.uniform(-0.4, 0.4);
        Eigen::VectorXd qm(q.size());
        for (std::size_t j = 0; j < m.coordinate_count(); ++j) {
            qm[static_cast<Eigen::Index>(map.partner[j])] = map.sign[j] * q[static_cast<Eigen::Index>(j)];
        }
        const auto R = moment_arm_matrix(m, Posture::at(q));
        const auto Rm = moment_arm_matrix(m, Posture::at(qm));
        double worst = 0.0;
        for (std::size_t i = 0; i < m.muscles.size(); ++i) {
            const auto im = static_cast<Eigen::Index>(m.muscle_index(mirror_name(m.muscles[i].name)));
            for (std::size_t j = 0; j < m.coordinate_count(); ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                const auto jm = static_cast<Eigen::Index>(map.partner[j]);
                worst = std::max(worst, std::abs(R(jj, static_cast<Eigen::Index>(i)) - map.sign[j] * Rm(jm, im)));
            }
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("limit warnings name the coordinate") {
    const Model& m = default_model();
    Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.coordinate_count()));
    CHECK(limit_warnings(m, Posture::at(q)).empty());
    q[static_cast<Eigen::Index>(m.coordinate_index("lumbar_flexion"))] = 3.0;
    const auto w = limit_warnings(m, Posture::at(q));
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("lumbar_flexion") != std::string::npos);
}
