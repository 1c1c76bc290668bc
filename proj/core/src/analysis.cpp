#include "trunkload/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trunkload {

GroupActivation group_activation(const ActivationSolution& solution, const Model& model, std::string_view group,
                                 Side side) {
    if (solution.activations.size() != static_cast<Eigen::Index>(model.muscles.size())) {
        throw DimensionError("activation vector has " + std::to_string(solution.activations.size()) +
                             " entries, model has " + std::to_string(model.muscles.size()) + " muscles");
    }
    GroupActivation out;
    out.group = std::string(group);
    out.side = side;
    if (const auto g = model.find_group(group)) out.anatomical = model.groups[*g].anatomical_name;
    double sum = 0.0;
    for (std::size_t i = 0; i < model.muscles.size(); ++i) {
        const auto& m = model.muscles[i];
        if (m.group != group || m.side != side) continue;
        const double a = solution.activations[static_cast<Eigen::Index>(i)];
        sum += a;
        out.peak = out.elements == 0 ? a : std::max(out.peak, a);
        ++out.elements;
    }
    if (out.elements == 0) {
        throw EmptyGroup("group '" + std::string(group) + "' has no " + std::string(to_string(side)) + " elements");
    }
    out.level = std::min(sum / static_cast<double>(out.elements), out.peak);
    return out;
}

double asymmetry_index(double left, double right) {
    return (left - right) / std::max({left, right, kAsymmetryEpsilon});
}

std::string_view to_string(Severity s) { return s == Severity::severe ? "severe" : "warn"; }

void RiskThresholds::validate() const {
    if (!(warn > 0.0) || !(severe >= warn) || severe > 1.0) {
        throw ConfigError("risk thresholds must satisfy 0 < warn <= severe <= 1");
    }
}

std::vector<RiskFlag> risk_flags(const SymmetryReport& report, const RiskThresholds& thresholds) {
    thresholds.validate();
    std::vector<RiskFlag> out;
    for (const auto& g : report.groups) {
        const double mag = std::abs(g.ai);
        if (mag < thresholds.warn) continue;
        out.push_back({g.group, g.anatomical, mag >= thresholds.severe ? Severity::severe : Severity::warn, g.ai});
    }
    return out;
}

SymmetryReport make_report(const Model& model, const ScenarioSnapshot& snapshot, const ActivationSolution& solution,
                           const SolverParams& params, const RiskThresholds& thresholds) {
    SymmetryReport r;
    r.walking_case = snapshot.config.walking_case;
    r.phase = snapshot.config.phase;

    double sum = 0.0;
    int count = 0;
    for (const auto anatomical : kTrunkGroups) {
        for (const auto& g : model.groups) {
            if (g.anatomical_name != anatomical) continue;
            GroupSymmetry s;
            s.group = g.id;
            s.anatomical = anatomical;
            s.left = group_activation(solution, model, g.id, Side::left);
            s.right = group_activation(solution, model, g.id, Side::right);
            s.ai = asymmetry_index(s.left.level, s.right.level);
            sum += s.left.level + s.right.level;
            count += 2;
            r.groups.push_back(std::move(s));
        }
    }
    r.trunk_mean = count > 0 ? sum / count : 0.0;
    r.flags = risk_flags(r, thresholds);

    for (const auto& g : model.groups) {
        for (const auto side : {Side::left, Side::right, Side::midline}) {
            const bool any = std::any_of(model.muscles.begin(), model.muscles.end(),
                                         [&](const MuscleElement& m) { return m.group == g.id && m.side == side; });
            if (any) r.activations.push_back(group_activation(solution, model, g.id, side));
        }
    }

    auto& a = r.assumptions;
    a.injured_side = snapshot.config.injured_side;
    a.injured_foot_fraction = snapshot.config.injured_foot_fraction;
    a.crutch_share = snapshot.config.crutch_share;
    a.body_weight = snapshot.body_weight;
    a.posture_hash = hash_hex(snapshot.posture_hash);
    a.exponent = params.exponent;
    a.reserve_weight = params.reserve_weight;
    a.reserves_enabled = params.reserves_enabled;

    r.supports = snapshot.supports;
    for (std::size_t j = 0; j < model.coordinates.size(); ++j) {
        const double v = solution.reserves.size() > 0 ? solution.reserves[static_cast<Eigen::Index>(j)] : 0.0;
        r.reserves.emplace_back(model.coordinates[j].name, v);
    }
    r.status = solution.status;
    r.objective = solution.objective;
    r.degenerate = solution.degenerate;
    return r;
}

ComparisonTable compare_cases(std::span<const SymmetryReport> reports) {
    if (reports.empty()) throw EmptyInput("comparison needs at least one report");
    ComparisonTable t;
    for (const auto& r : reports) {
        t.columns.push_back(std::string(to_string(r.walking_case)) + "/" + std::string(to_string(r.phase)));
        t.trunk_mean.push_back(r.trunk_mean);
    }
    // Row set: union of trunk groups in first-seen order.
    for (const auto& r : reports) {
        for (const auto& g : r.groups) {
            for (const auto side : {Side::left, Side::right}) {
                const bool seen = std::any_of(t.rows.begin(), t.rows.end(), [&](const ComparisonRow& row) {
                    return row.group == g.group && row.side == side;
                });
                if (!seen) t.rows.push_back({g.group, g.anatomical, side, {}});
            }
        }
    }
    for (auto& row : t.rows) {
        for (const auto& r : reports) {
            double v = std::numeric_limits<double>::quiet_NaN();
            for (const auto& g : r.groups) {
                if (g.group == row.group) v = row.side == Side::left ? g.left.level : g.right.level;
            }
            row.values.push_back(v);
        }
    }
    return t;
}

}  // namespace trunkload
