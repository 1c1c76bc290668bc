#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trunkload/static_optimization.hpp"

namespace trunkload {

inline constexpr int kOracleMaxMuscles = 6;
inline constexpr std::uint64_t kOracleMaxPoints = 500'000'000;

struct OracleResult {
    ActivationSolution solution;  // status infeasible when no grid point qualifies
    double grid_slack = 0.0;      // objective error bound from gridding: p * n * step / 2
    std::uint64_t evaluated = 0;
    std::uint64_t feasible = 0;
};

/// Exhaustive search of {0, step, ..., 1}^n (1 always included). A point is
/// feasible when |A a - tau|_j <= step/2 * max_i |A_ji| + 1e-9 * max(1, |tau_j|),
/// with A = R diag(f_max). Objective is sum_i a_i^p, no reserves.
/// Throws TooLarge beyond kOracleMaxMuscles or kOracleMaxPoints.
OracleResult brute_force_oracle(const ActivationProblem& problem, int exponent, double grid_step);

struct OracleCheckConfig {
    int instances = 100;
    std::uint64_t seed = 42;
    double grid_step = 0.02;
    int max_muscles = 4;
    int max_coordinates = 2;
    int exponent = 2;
    double tolerance = 1e-3;  // allowed |objective gap| on top of the grid slack
};

struct OracleCheckCase {
    int index = 0;
    int muscles = 0;
    int coordinates = 0;
    double solver_objective = 0.0;
    double oracle_objective = 0.0;
    double grid_slack = 0.0;
    double max_residual = 0.0;  // relative, residual_j / max(1, |tau_j|)
    bool passed = false;
    std::string note;
};

struct OracleCheckReport {
    std::vector<OracleCheckCase> cases;
    double max_deviation = 0.0;
    double max_residual = 0.0;
    int failures = 0;
};

/// Seeded random instances with a known feasible activation; compares the
/// solver (reserves disabled) against the brute-force oracle.
OracleCheckReport run_oracle_check(const OracleCheckConfig& config);

/// One random instance from the oracle-check generator: a known feasible
/// activation in [0.1, 0.9], moment arms of 2-8 cm with random sign, and no
/// two coordinate rows closer than |cos| = 0.9.
ActivationProblem random_activation_problem(std::uint64_t seed, int index, int max_muscles, int max_coordinates);

}  // namespace trunkload
