#include <benchmark/benchmark.h>

#include <filesystem>
#include <vector>

#include "trunkload/kinematics.hpp"
#include "trunkload/oracle.hpp"
#include "trunkload/pipeline.hpp"

using namespace trunkload;

namespace {

const Model& shipped() {
    static const Model m = load_model_file(std::filesystem::path(TRUNKLOAD_BENCH_DATA_DIR) / "models" / "default_trunk.json");
    return m;
}

Posture case_posture(const Model& m, WalkingCase c) {
    return posture_from_table(m, default_posture(c, default_phase(c)), Side::right);
}

AnalysisRequest request(WalkingCase c) {
    AnalysisRequest req;
    req.config.walking_case = c;
    req.config.phase = default_phase(c);
    return req;
}

}  // namespace

static void BM_ForwardKinematics(benchmark::State& state) {
    const Model& m = shipped();
    const Posture q = case_posture(m, WalkingCase::normal);
    for (auto _ : state) benchmark::DoNotOptimize(forward_kinematics(m, q));
}
BENCHMARK(BM_ForwardKinematics);

static void BM_MomentArmMatrix(benchmark::State& state) {
    const Model& m = shipped();
    const Posture q = case_posture(m, WalkingCase::normal);
    for (auto _ : state) benchmark::DoNotOptimize(moment_arm_matrix(m, q));
    state.counters["muscles"] = static_cast<double>(m.muscles.size());
}
BENCHMARK(BM_MomentArmMatrix);

static void BM_InverseDynamics(benchmark::State& state) {
    const Model m = model_for_case(shipped(), WalkingCase::single_crutch, Side::right);
    ScenarioConfig cfg;
    cfg.walking_case = WalkingCase::single_crutch;
    cfg.phase = Phase::shared_support;
    const auto snap = build_snapshot(cfg, m);
    for (auto _ : state) benchmark::DoNotOptimize(inverse_dynamics(m, snap.posture, snap.loads));
}
BENCHMARK(BM_InverseDynamics);

static void BM_SolveRandom(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const bool reserves = state.range(1) != 0;
    std::vector<ActivationProblem> problems;
    for (int i = 0; i < 32; ++i) problems.push_back(random_activation_problem(7, i, 6, 3));
    SolverParams params;
    params.exponent = p;
    params.reserves_enabled = reserves;
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_activation_problem(problems[k], params));
        k = (k + 1) % problems.size();
    }
}
BENCHMARK(BM_SolveRandom)->ArgsProduct({{1, 2, 3}, {0, 1}});

static void BM_AnalyzeCase(benchmark::State& state) {
    const auto c = static_cast<WalkingCase>(state.range(0));
    const AnalysisRequest req = request(c);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(shipped(), req));
    state.SetLabel(std::string(to_string(c)));
}
BENCHMARK(BM_AnalyzeCase)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_CompareThreeCases(benchmark::State& state) {
    for (auto _ : state) {
        std::vector<SymmetryReport> reports;
        for (const auto c : {WalkingCase::normal, WalkingCase::single_crutch, WalkingCase::double_crutch}) {
            reports.push_back(analyze(shipped(), request(c)).report);
        }
        benchmark::DoNotOptimize(compare_cases(reports));
    }
}
BENCHMARK(BM_CompareThreeCases)->Unit(benchmark::kMillisecond);

static void BM_BruteForceOracle(benchmark::State& state) {
    const auto prob = random_activation_problem(42, 0, 4, 2);
    const double step = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_oracle(prob, 2, step));
}
BENCHMARK(BM_BruteForceOracle)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
