#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "trunkload/model.hpp"

namespace trunkload {

/// Generalized state, ordered per `Model::coordinates`.
struct Posture {
    Eigen::VectorXd q;
    Eigen::VectorXd qdot;
    Eigen::VectorXd qddot;

    /// Reference configuration at rest.
    static Posture zero(const Model& model);
    /// Static posture at `q` (rates zero).
    static Posture at(Eigen::VectorXd q);
};

/// Body frame -> ground frame.
struct Placement {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& local) const { return translation + rotation * local; }
};

/// One placement per model segment (index-aligned with `Model::segments`).
struct FramePlacement {
    std::vector<Placement> segments;
    const Placement& operator[](std::size_t i) const { return segments[i]; }
};

/// Central finite-difference step used for moment arms (rad or m).
inline constexpr double kMomentArmStep = 1e-5;

void check_posture_dimension(const Model& model, const Posture& posture);

FramePlacement forward_kinematics(const Model& model, const Eigen::VectorXd& q);
FramePlacement forward_kinematics(const Model& model, const Posture& posture);

/// Musculotendon length: polyline length through the path points in ground.
double muscle_length(const Model& model, const FramePlacement& frames, std::size_t muscle);
double muscle_length(const Model& model, const Posture& posture, std::string_view muscle);

/// r = -dL/dq by central differences. Positive r: activation produces a
/// positive generalized force on the coordinate.
double moment_arm(const Model& model, const Posture& posture, std::string_view muscle,
                  std::string_view coordinate);

/// Moment arms for every (coordinate, muscle) pair; rows are coordinates.
Eigen::MatrixXd moment_arm_matrix(const Model& model, const Posture& posture);

/// Ground-frame location of a site.
Vec3 site_position(const Model& model, const FramePlacement& frames, std::string_view site);

/// Coordinates outside their declared limits (warnings, not errors).
std::vector<std::string> limit_warnings(const Model& model, const Posture& posture);

}  // namespace trunkload
