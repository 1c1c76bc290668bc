#include "trunkload/static_optimization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/QR>

#include "projected_newton.hpp"

namespace trunkload {

namespace {

constexpr double kBoundEps = 1e-12;

std::vector<Eigen::Index> free_indices(const Eigen::VectorXd& a) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] > kBoundEps && a[i] < 1.0 - kBoundEps) out.push_back(i);
    }
    return out;
}

Eigen::MatrixXd columns(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
    return out;
}

/// Non-unique optimum: with a linear cost the free activations can move
/// inside the null space of their moment columns.
bool is_degenerate(int exponent, const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
    if (exponent != 1) return false;
    const auto idx = free_indices(x);
    if (idx.empty()) return false;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(columns(a, idx));
    qr.setThreshold(1e-10);
    return qr.rank() < static_cast<Eigen::Index>(idx.size());
}

bool residuals_ok(const Eigen::VectorXd& residual, const Eigen::VectorXd& tau, double tol) {
    for (Eigen::Index j = 0; j < residual.size(); ++j) {
        if (std::abs(residual[j]) > tol * std::max(1.0, std::abs(tau[j]))) return false;
    }
    return true;
}

/// Exact minimum-norm re-solve on the identified face (p = 2).
void polish_quadratic(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd& x) {
    const auto idx = free_indices(x);
    if (idx.empty()) return;
    Eigen::VectorXd fixed = x;
    for (auto i : idx) fixed[i] = 0.0;
    const Eigen::VectorXd rhs = b - a * fixed;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(columns(a, idx));
    const Eigen::VectorXd sol = cod.solve(rhs);
    if (!sol.allFinite()) return;
    if (sol.minCoeff() < -kBoundEps || sol.maxCoeff() > 1.0 + kBoundEps) return;
    Eigen::VectorXd candidate = fixed;
    for (std::size_t k = 0; k < idx.size(); ++k) candidate[idx[k]] = std::clamp(sol[static_cast<Eigen::Index>(k)], 0.0, 1.0);
    if ((a * candidate - b).norm() <= (a * x - b).norm()) x = candidate;
}

}  // namespace

void SolverParams::validate() const {
    if (exponent < 1 || exponent > 3) throw ConfigError("exponent must be 1, 2 or 3");
    if (!(reserve_weight > 0.0)) throw ConfigError("reserve_weight must be positive");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
}

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::max_iters: return "max_iters";
    }
    return "optimal";
}

double tau_scale(const Eigen::VectorXd& tau) {
    return std::max(1.0, tau.size() > 0 ? tau.cwiseAbs().maxCoeff() : 0.0);
}

ActivationSolution solve_activation_problem(const ActivationProblem& problem, const SolverParams& params) {
    params.validate();
    const auto n = problem.f_max.size();
    const auto m = problem.tau.size();
    if (problem.moment_arms.rows() != m || problem.moment_arms.cols() != n) {
        std::ostringstream msg;
        msg << "moment-arm matrix is " << problem.moment_arms.rows() << "x" << problem.moment_arms.cols()
            << ", expected " << m << "x" << n;
        throw DimensionError(msg.str());
    }
    const Eigen::MatrixXd a = problem.moment_arms * problem.f_max.asDiagonal();
    const Eigen::VectorXd& tau = problem.tau;

    ActivationSolution sol;
    const double inner_tol = 1e-13;

    if (params.reserves_enabled) {
        const double scale = tau_scale(tau);
        detail::BoxProblem box{params.exponent, a, tau,
                               Eigen::VectorXd::Constant(m, 2.0 * params.reserve_weight / (scale * scale)), {}};
        auto res = detail::minimize_box(box, Eigen::VectorXd::Zero(n), inner_tol, params.max_iters);
        sol.activations = res.x;
        sol.reserves = tau - a * res.x;
        sol.residuals = (a * res.x + sol.reserves - tau).cwiseAbs();
        sol.objective = detail::separable_cost(params.exponent, res.x) +
                        params.reserve_weight * (sol.reserves / scale).squaredNorm();
        sol.iterations = res.iterations;
        sol.status = res.converged ? SolveStatus::optimal : SolveStatus::max_iters;
        sol.degenerate = is_degenerate(params.exponent, a, res.x);
        return sol;
    }

    // Equality-constrained: rows scaled to unit magnitude for the inner solves.
    Eigen::VectorXd row_scale(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double amax = n > 0 ? a.row(j).cwiseAbs().maxCoeff() : 0.0;
        const double mag = std::max(std::abs(tau[j]), amax);
        row_scale[j] = mag > 0.0 ? 1.0 / mag : 1.0;
    }
    const Eigen::MatrixXd as = row_scale.asDiagonal() * a;
    const Eigen::VectorXd bs = row_scale.cwiseProduct(tau);

    // Phase 1: closest achievable balance.
    detail::BoxProblem feas{0, as, bs, Eigen::VectorXd::Ones(m), {}};
    auto phase1 = detail::minimize_box(feas, Eigen::VectorXd::Zero(n), 1e-15, std::max(params.max_iters, 200));
    Eigen::VectorXd x = phase1.x;
    sol.iterations = phase1.iterations;
    {
        const Eigen::VectorXd r = as * x - bs;
        const Eigen::VectorXd raw = (a * x - tau).cwiseAbs();
        if (r.cwiseAbs().maxCoeff() > std::max(1e-6, 100.0 * params.tolerance)) {
            Eigen::Index worst = 0;
            r.cwiseAbs().maxCoeff(&worst);
            sol.activations = x;
            sol.reserves = Eigen::VectorXd::Zero(m);
            sol.residuals = raw;
            sol.objective = detail::separable_cost(params.exponent, x);
            sol.status = SolveStatus::infeasible;
            std::ostringstream msg;
            msg << "infeasible: no activation in [0,1] balances coordinate " << worst << " (demand "
                << tau[worst] << ", unbalanced " << raw[worst] << ")";
            throw InfeasibleError(msg.str(), sol, static_cast<std::size_t>(worst));
        }
    }

    // Phase 2: augmented Lagrangian over the box.
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    double rho = 10.0;
    double prev_norm = std::numeric_limits<double>::infinity();
    bool done = false;
    for (int outer = 0; outer < params.max_iters; ++outer) {
        detail::BoxProblem al{params.exponent, as, bs, Eigen::VectorXd::Constant(m, rho), -as.transpose() * lambda};
        auto inner = detail::minimize_box(al, x, inner_tol, 500);
        x = inner.x;
        sol.iterations += inner.iterations;
        if (params.exponent == 2) polish_quadratic(as, bs, x);

        const Eigen::VectorXd r = as * x - bs;
        if (residuals_ok(a * x - tau, tau, params.tolerance) && r.cwiseAbs().maxCoeff() <= params.tolerance &&
            inner.converged) {
            done = true;
            break;
        }
        lambda -= rho * r;
        const double norm = r.norm();
        if (norm > 0.25 * prev_norm) rho = std::min(rho * 10.0, 1e12);
        prev_norm = norm;
    }

    sol.activations = x;
    sol.reserves = Eigen::VectorXd::Zero(m);
    sol.residuals = (a * x - tau).cwiseAbs();
    sol.objective = detail::separable_cost(params.exponent, x);
    sol.status = done ? SolveStatus::optimal : SolveStatus::max_iters;
    sol.degenerate = is_degenerate(params.exponent, as, x);
    return sol;
}

ActivationSolution solve_static_optimization(const Model& model, const Posture& posture,
                                             const GeneralizedForces& tau, const SolverParams& params) {
    check_posture_dimension(model, posture);
    if (tau.tau.size() != static_cast<Eigen::Index>(model.coordinate_count())) {
        throw DimensionError("generalized force dimension " + std::to_string(tau.tau.size()) + " != coordinate count " +
                             std::to_string(model.coordinate_count()));
    }
    ActivationProblem problem;
    problem.f_max.resize(static_cast<Eigen::Index>(model.muscles.size()));
    for (std::size_t i = 0; i < model.muscles.size(); ++i) problem.f_max[static_cast<Eigen::Index>(i)] = model.muscles[i].f_max;
    problem.moment_arms = moment_arm_matrix(model, posture);
    problem.tau = tau.tau;
    try {
        return solve_activation_problem(problem, params);
    } catch (const InfeasibleError& e) {
        const auto& name = model.coordinates[e.coordinate()].name;
        throw InfeasibleError(std::string(e.what()) + " [coordinate '" + name + "']", e.best(), e.coordinate());
    }
}

}  // namespace trunkload
