#pragma once

#include <span>
#include <string>

#include <Eigen/Core>

#include "trunkload/kinematics.hpp"
#include "trunkload/model.hpp"

namespace trunkload {

/// Force applied at a body-fixed point; force and torque in ground axes.
struct ExternalLoad {
    std::string segment;
    Vec3 point = Vec3::Zero();
    Vec3 force = Vec3::Zero();
    Vec3 torque = Vec3::Zero();
};

/// Joint moments (N·m) or forces (N), ordered per `Model::coordinates`.
struct GeneralizedForces {
    Eigen::VectorXd tau;
};

/// Recursive Newton-Euler: generalized forces that produce the posture's
/// accelerations under gravity and the given external loads. With zero
/// rates this is the quasi-static moment balance.
GeneralizedForces inverse_dynamics(const Model& model, const Posture& posture,
                                   std::span<const ExternalLoad> loads);

}  // namespace trunkload
