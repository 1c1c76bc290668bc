#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "trunkload/model.hpp"

#ifndef TRUNKLOAD_TEST_DATA_DIR
#error "TRUNKLOAD_TEST_DATA_DIR must be defined"
#endif

namespace trunkload::test {

inline std::filesystem::path data_dir() { return TRUNKLOAD_TEST_DATA_DIR; }
inline std::filesystem::path default_model_path() { return data_dir() / "models" / "default_trunk.json"; }

inline const Model& default_model() {
    static const Model model = load_model_file(default_model_path());
    return model;
}

// Planar hinge about z at the ground origin. The muscle runs from ground
// (0, 1, 0) to the arm at local (0.5, 0, 0), so L(q) = sqrt(1.25 - sin q).
inline std::string hinge_document() {
    return R"({
  "segments": [{"name": "arm", "mass": 1.0, "com": [0.25, 0, 0], "inertia": [0.01, 0.01, 0.01]}],
  "joints": [{"name": "hinge", "parent": "ground", "child": "arm", "kind": "revolute", "axis": [0, 0, 1]}],
  "groups": [{"id": "flexor", "anatomical_name": "other"}],
  "muscles": [{"name": "flexor", "group": "flexor", "side": "midline", "f_max": 100,
               "path": [{"segment": "ground", "point": [0, 1, 0]}, {"segment": "arm", "point": [0.5, 0, 0]}]}]
})";
}

// Point mass of 2 kg at `com` on a hinge about z at the origin.
inline Model pendulum(const Vec3& com, const Vec3& gravity = Vec3(0.0, -9.81, 0.0)) {
    Model m;
    m.segments.push_back({"ground", 0.0, Vec3::Zero(), Mat3::Zero()});
    m.segments.push_back({"bob", 2.0, com, Mat3::Zero()});
    JointDef j;
    j.name = "hinge";
    j.parent = "ground";
    j.child = "bob";
    j.kind = JointKind::revolute;
    j.axes = {Vec3::UnitZ()};
    j.coordinates = {"hinge"};
    m.joints.push_back(j);
    m.gravity = gravity;
    m.rebuild();
    return m;
}

inline CrutchConfig crutches(int count, Side injured) {
    CrutchConfig c;
    c.count = count;
    c.injured_side = injured;
    return c;
}

/// Portable uniform draws for property tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace trunkload::test
