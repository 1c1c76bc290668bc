#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trunkload/analysis.hpp"
#include "trunkload/inverse_dynamics.hpp"
#include "trunkload/model.hpp"
#include "trunkload/scenarios.hpp"
#include "trunkload/static_optimization.hpp"

namespace trunkload {

struct AnalysisRequest {
    ScenarioConfig config;
    std::optional<PostureTable> posture;  // shipped library when absent
    SolverParams params;
    RiskThresholds thresholds;
};

struct AnalysisResult {
    Model model;  // with crutches attached for the case
    ScenarioSnapshot snapshot;
    GeneralizedForces tau;
    ActivationSolution solution;
    SymmetryReport report;
    std::vector<std::string> warnings;
};

/// The model a case runs on: crutches are attached from the hand sites unless
/// the model already carries crutch tips. Throws ModelMismatch.
Model model_for_case(const Model& base, WalkingCase walking_case, Side injured_side);

/// snapshot -> inverse dynamics -> static optimization -> symmetry report.
AnalysisResult analyze(const Model& base, const AnalysisRequest& request);

}  // namespace trunkload
