#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trunkload/model.hpp"
#include "trunkload/scenarios.hpp"
#include "trunkload/static_optimization.hpp"

namespace trunkload {

struct GroupActivation {
    std::string group;  // model group id
    AnatomicalGroup anatomical = AnatomicalGroup::other;
    Side side = Side::midline;
    double level = 0.0;  // mean member activation
    double peak = 0.0;   // max member activation
    std::size_t elements = 0;
};

/// Mean and max activation of one group-side. Throws EmptyGroup when the
/// group has no element on that side, DimensionError on a size mismatch.
GroupActivation group_activation(const ActivationSolution& solution, const Model& model, std::string_view group,
                                 Side side);

inline constexpr double kAsymmetryEpsilon = 1e-6;

/// (left - right) / max(left, right, eps); positive means left-dominant.
double asymmetry_index(double left, double right);

enum class Severity { warn, severe };
std::string_view to_string(Severity s);

struct RiskThresholds {
    double warn = 0.3;
    double severe = 0.6;
    void validate() const;
};

struct GroupSymmetry {
    std::string group;
    AnatomicalGroup anatomical = AnatomicalGroup::other;
    GroupActivation left;
    GroupActivation right;
    double ai = 0.0;
};

struct RiskFlag {
    std::string group;
    AnatomicalGroup anatomical = AnatomicalGroup::other;
    Severity severity = Severity::warn;
    double ai = 0.0;
};

/// Knobs echoed into every report so a number can be traced to its inputs.
struct Assumptions {
    Side injured_side = Side::right;
    double injured_foot_fraction = 0.0;
    double crutch_share = 0.0;
    double body_weight = 0.0;
    std::string posture_hash;
    int exponent = 2;
    double reserve_weight = 0.0;
    bool reserves_enabled = true;
};

struct SymmetryReport {
    WalkingCase walking_case = WalkingCase::normal;
    Phase phase = Phase::mid_stance;
    std::vector<GroupSymmetry> groups;          // trunk groups, canonical order
    double trunk_mean = 0.0;                    // mean of all trunk group-side levels
    std::vector<RiskFlag> flags;
    std::vector<GroupActivation> activations;   // every group-side with elements
    Assumptions assumptions;
    std::vector<SupportForce> supports;
    std::vector<std::pair<std::string, double>> reserves;  // coordinate -> reserve
    SolveStatus status = SolveStatus::optimal;
    double objective = 0.0;
    bool degenerate = false;
};

/// Flags every trunk group with |AI| >= warn (severe when >= severe).
std::vector<RiskFlag> risk_flags(const SymmetryReport& report, const RiskThresholds& thresholds = {});

SymmetryReport make_report(const Model& model, const ScenarioSnapshot& snapshot, const ActivationSolution& solution,
                           const SolverParams& params, const RiskThresholds& thresholds = {});

struct ComparisonRow {
    std::string group;
    AnatomicalGroup anatomical = AnatomicalGroup::other;
    Side side = Side::left;
    std::vector<double> values;  // one per column; NaN when the column lacks the group
};

struct ComparisonTable {
    std::vector<std::string> columns;  // "case/phase"
    std::vector<ComparisonRow> rows;
    std::vector<double> trunk_mean;
};

/// Rows = trunk groups x sides, columns = reports. Throws EmptyInput.
ComparisonTable compare_cases(std::span<const SymmetryReport> reports);

}  // namespace trunkload
