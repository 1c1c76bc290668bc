#pragma once

#include <Eigen/Core>

namespace trunkload::detail {

/// minimize  sum_i a_i^p  +  1/2 (A a - b)^T diag(w) (A a - b)  +  c^T a
/// subject to 0 <= a <= 1.
///
/// p = 0 drops the separable term (pure box least squares). The objective is
/// convex on the box for p in {0, 1, 2, 3}.
struct BoxProblem {
    int exponent = 2;
    Eigen::MatrixXd a;        // rows x n
    Eigen::VectorXd b;        // rows
    Eigen::VectorXd weights;  // rows, >= 0
    Eigen::VectorXd linear;   // n (may be empty: zero)
};

struct BoxResult {
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

double separable_cost(int exponent, const Eigen::VectorXd& x);
double box_objective(const BoxProblem& problem, const Eigen::VectorXd& x);

/// Bertsekas-style projected Newton with an Armijo search along the
/// projection arc. Converges finitely on strictly convex quadratics once the
/// active set settles.
BoxResult minimize_box(const BoxProblem& problem, Eigen::VectorXd x0, double tolerance, int max_iters);

}  // namespace trunkload::detail
