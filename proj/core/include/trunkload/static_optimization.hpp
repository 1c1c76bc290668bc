#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "trunkload/inverse_dynamics.hpp"
#include "trunkload/kinematics.hpp"
#include "trunkload/model.hpp"

namespace trunkload {

struct SolverParams {
    int exponent = 2;             // cost sum_i a_i^p, p in {1, 2, 3}
    double reserve_weight = 1e3;  // penalty on (reserve_j / tau_scale)^2
    int max_iters = 200;
    double tolerance = 1e-8;      // residual_j <= tolerance * max(1, |tau_j|)
    bool reserves_enabled = true;

    /// Throws ConfigError when out of range.
    void validate() const;
};

enum class SolveStatus { optimal, infeasible, max_iters };
std::string_view to_string(SolveStatus status);

struct ActivationSolution {
    Eigen::VectorXd activations;  // per muscle, in [0, 1]
    Eigen::VectorXd reserves;     // per coordinate (N·m or N)
    Eigen::VectorXd residuals;    // |sum_i a_i f_i r_ij + reserve_j - tau_j|
    double objective = 0.0;
    SolveStatus status = SolveStatus::optimal;
    bool degenerate = false;      // optimum not unique (p = 1)
    int iterations = 0;
};

/// Raw redundancy problem: moment arms are rows = coordinates, cols = muscles.
struct ActivationProblem {
    Eigen::VectorXd f_max;
    Eigen::MatrixXd moment_arms;
    Eigen::VectorXd tau;
};

/// No activation in [0,1]^n balances the demand and reserves are disabled.
/// Carries the least-squares best effort and the worst-balanced coordinate.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& message, ActivationSolution best, std::size_t coordinate)
        : Error(message), best_(std::move(best)), coordinate_(coordinate) {}

    const ActivationSolution& best() const noexcept { return best_; }
    std::size_t coordinate() const noexcept { return coordinate_; }

private:
    ActivationSolution best_;
    std::size_t coordinate_;
};

/// tau_scale = max(1, max_j |tau_j|).
double tau_scale(const Eigen::VectorXd& tau);

/// Minimizes sum_i a_i^p + w sum_j (reserve_j / tau_scale)^2 subject to
/// sum_i a_i f_i r_ij + reserve_j = tau_j and 0 <= a <= 1. With reserves
/// disabled the equalities must hold on their own; throws InfeasibleError
/// when they cannot.
ActivationSolution solve_activation_problem(const ActivationProblem& problem, const SolverParams& params);

/// Same, with moment arms evaluated on the model at the posture.
ActivationSolution solve_static_optimization(const Model& model, const Posture& posture,
                                             const GeneralizedForces& tau, const SolverParams& params);

}  // namespace trunkload
