#include "trunkload/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace trunkload {

namespace {

double power(int p, double x) {
    double out = 1.0;
    for (int k = 0; k < p; ++k) out *= x;
    return out;
}

/// Uniform [0,1) from the raw 64-bit stream; identical on every platform.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }
    int next_int(int lo, int hi) {
        return lo + static_cast<int>(next() * static_cast<double>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

constexpr double kMaxRowCosine = 0.9;

double max_row_cosine(const Eigen::MatrixXd& r) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < r.rows(); ++j) {
        for (Eigen::Index k = j + 1; k < r.rows(); ++k) {
            worst = std::max(worst, std::abs(r.row(j).dot(r.row(k))) / (r.row(j).norm() * r.row(k).norm()));
        }
    }
    return worst;
}

}  // namespace

OracleResult brute_force_oracle(const ActivationProblem& problem, int exponent, double grid_step) {
    const auto n = problem.f_max.size();
    const auto m = problem.tau.size();
    if (n > kOracleMaxMuscles) {
        throw TooLarge("brute-force oracle limited to " + std::to_string(kOracleMaxMuscles) + " muscles, got " +
                       std::to_string(n));
    }
    if (!(grid_step > 0.0) || grid_step > 1.0) throw ConfigError("grid step must lie in (0, 1]");
    if (exponent < 1 || exponent > 3) throw ConfigError("exponent must be 1, 2 or 3");
    if (problem.moment_arms.rows() != m || problem.moment_arms.cols() != n) {
        throw DimensionError("moment-arm matrix does not match f_max and tau");
    }

    std::vector<double> values;
    const auto steps = static_cast<long long>(std::floor(1.0 / grid_step + 1e-9));
    for (long long k = 0; k <= steps; ++k) values.push_back(std::min(1.0, static_cast<double>(k) * grid_step));
    if (values.back() < 1.0 - 1e-12) values.push_back(1.0);
    const auto nv = values.size();

    double total = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) total *= static_cast<double>(nv);
    if (total > static_cast<double>(kOracleMaxPoints)) {
        std::ostringstream msg;
        msg << "brute-force grid has " << total << " points (limit " << kOracleMaxPoints << ")";
        throw TooLarge(msg.str());
    }

    const Eigen::MatrixXd a = problem.moment_arms * problem.f_max.asDiagonal();
    Eigen::VectorXd slack(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double amax = n > 0 ? a.row(j).cwiseAbs().maxCoeff() : 0.0;
        slack[j] = 0.5 * grid_step * amax + 1e-9 * std::max(1.0, std::abs(problem.tau[j]));
    }
    std::vector<double> cost(nv);
    for (std::size_t k = 0; k < nv; ++k) cost[k] = power(exponent, values[k]);

    OracleResult out;
    out.grid_slack = exponent * static_cast<double>(n) * grid_step / 2.0;
    auto& best = out.solution;
    best.status = SolveStatus::infeasible;
    best.objective = std::numeric_limits<double>::infinity();
    best.activations = Eigen::VectorXd::Zero(n);
    best.reserves = Eigen::VectorXd::Zero(m);

    std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    auto recompute = [&](Eigen::VectorXd& r, double& obj) {
        r = a * x - problem.tau;
        obj = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) obj += cost[digit[static_cast<std::size_t>(i)]];
    };
    Eigen::VectorXd r;
    double obj = 0.0;
    recompute(r, obj);

    while (true) {
        ++out.evaluated;
        bool feasible = true;
        for (Eigen::Index j = 0; feasible && j < m; ++j) feasible = std::abs(r[j]) <= slack[j];
        if (feasible) {
            ++out.feasible;
            if (obj < best.objective) {
                best.objective = obj;
                best.activations = x;
                best.status = SolveStatus::optimal;
            }
        }

        // odometer: the fastest digit is updated incrementally, carries recompute.
        if (n == 0) break;
        if (digit[0] + 1 < nv) {
            const double prev = x[0];
            ++digit[0];
            x[0] = values[digit[0]];
            r += a.col(0) * (x[0] - prev);
            obj += cost[digit[0]] - cost[digit[0] - 1];
            continue;
        }
        Eigen::Index i = 0;
        while (i < n && digit[static_cast<std::size_t>(i)] + 1 == nv) {
            digit[static_cast<std::size_t>(i)] = 0;
            x[i] = values[0];
            ++i;
        }
        if (i == n) break;
        ++digit[static_cast<std::size_t>(i)];
        x[i] = values[digit[static_cast<std::size_t>(i)]];
        recompute(r, obj);
    }

    if (best.status == SolveStatus::optimal) {
        best.residuals = (a * best.activations - problem.tau).cwiseAbs();
        best.objective = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) best.objective += power(exponent, best.activations[i]);
    } else {
        best.residuals = problem.tau.cwiseAbs();
    }
    return out;
}

ActivationProblem random_activation_problem(std::uint64_t seed, int index, int max_muscles, int max_coordinates) {
    Uniform rng(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index + 1)));
    const int m = rng.next_int(1, std::max(1, max_coordinates));
    const int n = rng.next_int(std::min(m + 1, max_muscles), max_muscles);
    ActivationProblem p;
    p.f_max.resize(n);
    p.moment_arms.resize(m, n);
    Eigen::VectorXd a_true(n);
    for (int i = 0; i < n; ++i) {
        p.f_max[i] = rng.next(500.0, 1500.0);
        a_true[i] = rng.next(0.1, 0.9);
    }
    // Nearly parallel constraint rows let the grid's residual slack buy large
    // objective drops; such draws are redrawn.
    do {
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < n; ++i) {
                const double mag = rng.next(0.02, 0.08);
                p.moment_arms(j, i) = rng.next() < 0.5 ? -mag : mag;
            }
        }
    } while (max_row_cosine(p.moment_arms) > kMaxRowCosine);
    p.tau = p.moment_arms * p.f_max.asDiagonal() * a_true;
    return p;
}

OracleCheckReport run_oracle_check(const OracleCheckConfig& config) {
    if (config.instances < 1) throw ConfigError("instance count must be positive");
    if (config.max_muscles < 2 || config.max_muscles > kOracleMaxMuscles) {
        throw TooLarge("muscle count must lie in [2, " + std::to_string(kOracleMaxMuscles) + "]");
    }
    if (config.max_coordinates < 1 || config.max_coordinates >= config.max_muscles) {
        throw ConfigError("coordinate count must lie in [1, muscles - 1]");
    }
    SolverParams params;
    params.exponent = config.exponent;
    params.reserves_enabled = false;

    OracleCheckReport report;
    for (int k = 0; k < config.instances; ++k) {
        const auto problem = random_activation_problem(config.seed, k, config.max_muscles, config.max_coordinates);
        OracleCheckCase c;
        c.index = k;
        c.muscles = static_cast<int>(problem.f_max.size());
        c.coordinates = static_cast<int>(problem.tau.size());
        const auto oracle = brute_force_oracle(problem, config.exponent, config.grid_step);
        c.oracle_objective = oracle.solution.objective;
        c.grid_slack = oracle.grid_slack;
        try {
            const auto sol = solve_activation_problem(problem, params);
            c.solver_objective = sol.objective;
            for (Eigen::Index j = 0; j < problem.tau.size(); ++j) {
                c.max_residual = std::max(c.max_residual, sol.residuals[j] / std::max(1.0, std::abs(problem.tau[j])));
            }
            const double gap = std::abs(sol.objective - oracle.solution.objective);
            report.max_deviation = std::max(report.max_deviation, gap);
            report.max_residual = std::max(report.max_residual, c.max_residual);
            c.passed = sol.status == SolveStatus::optimal && oracle.solution.status == SolveStatus::optimal &&
                       c.max_residual <= params.tolerance && gap <= config.tolerance + oracle.grid_slack;
            if (!c.passed) {
                c.note = "status " + std::string(to_string(sol.status)) + ", oracle " +
                         std::string(to_string(oracle.solution.status));
            }
        } catch (const InfeasibleError& e) {
            c.note = e.what();
        }
        if (!c.passed) ++report.failures;
        report.cases.push_back(std::move(c));
    }
    return report;
}

}  // namespace trunkload
