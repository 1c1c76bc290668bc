#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "trunkload/oracle.hpp"
#include "trunkload/pipeline.hpp"
#include "trunkload/static_optimization.hpp"

using namespace trunkload;

namespace {

ActivationProblem one_coordinate(std::vector<double> arms, double f_max, double tau) {
    ActivationProblem p;
    const auto n = static_cast<Eigen::Index>(arms.size());
    p.f_max = Eigen::VectorXd::Constant(n, f_max);
    p.moment_arms.resize(1, n);
    for (Eigen::Index i = 0; i < n; ++i) p.moment_arms(0, i) = arms[static_cast<std::size_t>(i)];
    p.tau = Eigen::VectorXd::Constant(1, tau);
    return p;
}

SolverParams params(int p, bool reserves) {
    SolverParams s;
    s.exponent = p;
    s.reserves_enabled = reserves;
    return s;
}

void check_equilibrium(const ActivationProblem& prob, const ActivationSolution& s, double tol) {
    const Eigen::VectorXd force = prob.moment_arms * prob.f_max.cwiseProduct(s.activations);
    for (Eigen::Index j = 0; j < prob.tau.size(); ++j) {
        const double reserve = s.reserves.size() ? s.reserves[j] : 0.0;
        const double r = std::abs(force[j] + reserve - prob.tau[j]);
        CHECK(r <= tol * std::max(1.0, std::abs(prob.tau[j])));
        CHECK(std::abs(r - s.residuals[j]) <= 1e-9 * std::max(1.0, std::abs(prob.tau[j])));
    }
}

}  // namespace

TEST_CASE("two agonists share the load equally") {
    const auto prob = one_coordinate({0.05, 0.05}, 1000.0, 50.0);
    const auto s = solve_activation_problem(prob, params(2, false));
    CHECK(s.status == SolveStatus::optimal);
    CHECK(s.activations[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.activations[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.objective == doctest::Approx(0.5).epsilon(1e-12));

    // With reserves and a symmetric split the cost is 2 a^2 + w (1 - 2a)^2.
    const auto r = solve_activation_problem(prob, params(2, true));
    const double w = SolverParams{}.reserve_weight;
    const double a = w / (1.0 + 2.0 * w);
    CHECK(r.status == SolveStatus::optimal);
    CHECK(r.activations[0] == doctest::Approx(r.activations[1]).epsilon(1e-12));
    CHECK(r.activations[0] == doctest::Approx(a).epsilon(1e-9));
    CHECK(r.reserves[0] == doctest::Approx(50.0 - 100.0 * a).epsilon(1e-6));
}

TEST_CASE("antagonist stays silent at the capacity boundary") {
    const auto prob = one_coordinate({0.05, -0.05}, 1000.0, 50.0);
    const auto s = solve_activation_problem(prob, params(2, false));
    CHECK(s.status == SolveStatus::optimal);
    CHECK(s.activations[0] == 1.0);
    CHECK(s.activations[1] == 0.0);
}

TEST_CASE("demand beyond capacity is infeasible without reserves") {
    const auto prob = one_coordinate({0.05}, 1000.0, 100.0);
    try {
        solve_activation_problem(prob, params(2, false));
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.coordinate() == 0);
        CHECK(e.best().activations[0] == 1.0);
    }
    const auto s = solve_activation_problem(prob, params(2, true));
    CHECK(s.status == SolveStatus::optimal);
    CHECK(s.activations[0] == 1.0);
    CHECK(s.reserves[0] == doctest::Approx(50.0).epsilon(1e-6));
}

TEST_CASE("zero demand with reserves gives zero everything") {
    ActivationProblem prob = random_activation_problem(9, 0, 4, 2);
    prob.tau.setZero();
    for (int p = 1; p <= 3; ++p) {
        const auto s = solve_activation_problem(prob, params(p, true));
        CHECK(s.activations.cwiseAbs().maxCoeff() == 0.0);
        CHECK(s.reserves.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("solver parameters are validated") {
    const auto prob = one_coordinate({0.05, 0.05}, 1000.0, 50.0);
    CHECK_THROWS_AS(solve_activation_problem(prob, params(4, true)), ConfigError);
    SolverParams s;
    s.reserve_weight = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    ActivationProblem bad = prob;
    bad.tau = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(solve_activation_problem(bad, params(2, true)), DimensionError);
}

TEST_CASE("p = 1 picks the stronger lever and reports degeneracy on ties") {
    const auto tied = one_coordinate({0.05, 0.05}, 1000.0, 50.0);
    const auto s = solve_activation_problem(tied, params(1, false));
    CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.degenerate);
    const auto lever = one_coordinate({0.05, 0.02}, 1000.0, 40.0);
    const auto t = solve_activation_problem(lever, params(1, false));
    CHECK(t.activations[0] == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(t.activations[1] == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("property: optimal solves are balanced, boxed and deterministic") {
    for (int i = 0; i < 200; ++i) {
        const auto prob = random_activation_problem(77, i, 6, 3);
        for (int p = 1; p <= 3; ++p) {
            for (const bool reserves : {false, true}) {
                const auto s = solve_activation_problem(prob, params(p, reserves));
                REQUIRE(s.status == SolveStatus::optimal);
                CHECK(s.activations.minCoeff() >= 0.0);
                CHECK(s.activations.maxCoeff() <= 1.0);
                check_equilibrium(prob, s, params(p, reserves).tolerance);
                const auto again = solve_activation_problem(prob, params(p, reserves));
                CHECK(again.activations == s.activations);
                CHECK(again.objective == s.objective);
            }
        }
    }
}

TEST_CASE("property: scaling f_max and tau together keeps the activations") {
    for (int i = 0; i < 50; ++i) {
        const auto prob = random_activation_problem(91, i, 5, 2);
        for (int p = 2; p <= 3; ++p) {
            const auto base = solve_activation_problem(prob, params(p, false));
            for (const double k : {0.01, 3.0, 250.0}) {
                ActivationProblem scaled = prob;
                scaled.f_max *= k;
                scaled.tau *= k;
                const auto s = solve_activation_problem(scaled, params(p, false));
                CHECK((s.activations - base.activations).cwiseAbs().maxCoeff() <= 1e-6);
            }
        }
    }
}

TEST_CASE("oracle examples") {
    const auto prob = one_coordinate({0.05, 0.05}, 1000.0, 50.0);
    const auto o = brute_force_oracle(prob, 2, 0.01);
    CHECK(o.solution.activations[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(o.solution.activations[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(o.solution.objective == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(o.evaluated == 101 * 101);

    auto zero = random_activation_problem(5, 3, 4, 2);
    zero.tau.setZero();
    const auto z = brute_force_oracle(zero, 2, 0.05);
    CHECK(z.solution.activations.cwiseAbs().maxCoeff() == 0.0);
    CHECK(z.solution.objective == 0.0);

    const auto seven = one_coordinate({0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05}, 1000.0, 50.0);
    CHECK_THROWS_AS(brute_force_oracle(seven, 2, 0.1), TooLarge);
    const auto six = one_coordinate({0.05, 0.05, 0.05, 0.05, 0.05, 0.05}, 1000.0, 50.0);
    CHECK_THROWS_AS(brute_force_oracle(six, 2, 1e-3), TooLarge);
    CHECK_THROWS_AS(brute_force_oracle(prob, 2, 0.0), ConfigError);
    CHECK_THROWS_AS(brute_force_oracle(prob, 2, 1.5), ConfigError);
}

TEST_CASE("oracle grid always contains the upper bound") {
    const auto prob = one_coordinate({0.05}, 1000.0, 50.0);
    const auto o = brute_force_oracle(prob, 2, 0.3);
    CHECK(o.evaluated == 5);
    CHECK(o.grid_slack > 0.0);
}

// Dual route: the oracle enumerates the grid, the solver descends; their
// objectives agree up to the gridding error.
TEST_CASE("property: solver agrees with the brute-force oracle") {
    for (int p = 2; p <= 3; ++p) {
        CAPTURE(p);
        for (int i = 0; i < 40; ++i) {
            const auto prob = random_activation_problem(2024 + static_cast<std::uint64_t>(p), i, 4, 2);
            const auto s = solve_activation_problem(prob, params(p, false));
            const auto o = brute_force_oracle(prob, p, 0.02);
            REQUIRE(o.solution.status == SolveStatus::optimal);
            CHECK(std::abs(o.solution.objective - s.objective) <= 1e-3 + o.grid_slack);
        }
    }
}

TEST_CASE("oracle check runner is deterministic") {
    OracleCheckConfig cfg;
    cfg.instances = 10;
    const auto a = run_oracle_check(cfg);
    const auto b = run_oracle_check(cfg);
    REQUIRE(a.cases.size() == 10);
    for (std::size_t k = 0; k < a.cases.size(); ++k) {
        CHECK(a.cases[k].solver_objective == b.cases[k].solver_objective);
        CHECK(a.cases[k].oracle_objective == b.cases[k].oracle_objective);
    }
    CHECK(a.failures == 0);
    cfg.max_muscles = 7;
    CHECK_THROWS_AS(run_oracle_check(cfg), TooLarge);
}

TEST_CASE("random instances respect the generator contract") {
    for (int i = 0; i < 100; ++i) {
        const auto prob = random_activation_problem(3, i, 4, 2);
        const auto n = prob.f_max.size();
        const auto m = prob.tau.size();
        CHECK(n >= 2);
        CHECK(n <= 4);
        CHECK(m >= 1);
        CHECK(m < n);
        CHECK(prob.f_max.minCoeff() >= 500.0);
        CHECK(prob.f_max.maxCoeff() <= 1500.0);
        CHECK(prob.moment_arms.cwiseAbs().minCoeff() >= 0.02);
        CHECK(prob.moment_arms.cwiseAbs().maxCoeff() <= 0.08);
    }
}

TEST_CASE("model-level solve on the shipped model") {
    const Model& base = test::default_model();
    ScenarioConfig cfg;
    const auto snap = build_snapshot(cfg, base);
    const auto tau = inverse_dynamics(base, snap.posture, snap.loads);
    const auto s = solve_static_optimization(base, snap.posture, tau, SolverParams{});
    CHECK(s.status == SolveStatus::optimal);
    CHECK(s.activations.size() == static_cast<Eigen::Index>(base.muscles.size()));
    CHECK(s.reserves.size() == static_cast<Eigen::Index>(base.coordinate_count()));
    SolverParams strict;
    strict.reserves_enabled = false;
    GeneralizedForces huge = tau;
    huge.tau[static_cast<Eigen::Index>(base.coordinate_index("lumbar_flexion"))] = 1e5;
    try {
        solve_static_optimization(base, snap.posture, huge, strict);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.what()).find("coordinate '") != std::string::npos);
    }
}
