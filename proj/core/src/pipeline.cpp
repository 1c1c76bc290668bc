#include "trunkload/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include "trunkload/kinematics.hpp"

namespace trunkload {

Model model_for_case(const Model& base, WalkingCase walking_case, Side injured_side) {
    const int count = crutch_count(walking_case);
    if (count == 0) return base;
    const bool has_l = base.find_site(contact_site(Contact::left_crutch)).has_value();
    const bool has_r = base.find_site(contact_site(Contact::right_crutch)).has_value();
    if (has_l || has_r) return base;
    CrutchConfig cfg;
    cfg.count = count;
    cfg.injured_side = injured_side;
    return attach_crutches(base, cfg);
}

AnalysisResult analyze(const Model& base, const AnalysisRequest& request) {
    request.config.validate();
    request.params.validate();
    request.thresholds.validate();

    AnalysisResult out;
    out.model = model_for_case(base, request.config.walking_case, request.config.injured_side);
    out.snapshot = build_snapshot(request.config, out.model, request.posture);
    out.warnings = limit_warnings(out.model, out.snapshot.posture);
    out.tau = inverse_dynamics(out.model, out.snapshot.posture, out.snapshot.loads);
    out.solution = solve_static_optimization(out.model, out.snapshot.posture, out.tau, request.params);
    out.report = make_report(out.model, out.snapshot, out.solution, request.params, request.thresholds);

    // Reserves on coordinates the muscles can actually reach mean the muscle
    // set ran out of capacity there.
    const Eigen::MatrixXd r = moment_arm_matrix(out.model, out.snapshot.posture);
    for (std::size_t j = 0; j < out.model.coordinates.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (r.cols() == 0 || r.row(jj).cwiseAbs().maxCoeff() < 1e-9) continue;
        const double reserve = out.solution.reserves.size() > 0 ? out.solution.reserves[jj] : 0.0;
        const double demand = std::abs(out.tau.tau[jj]);
        if (std::abs(reserve) > 1.0 && std::abs(reserve) > 0.05 * demand) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "reserve carries %.2f of %.2f at '%s'", reserve, out.tau.tau[jj],
                          out.model.coordinates[j].name.c_str());
            out.warnings.emplace_back(buf);
        }
    }
    if (out.solution.status != SolveStatus::optimal) {
        out.warnings.push_back("solver status " + std::string(to_string(out.solution.status)));
    }
    if (out.solution.degenerate) out.warnings.emplace_back("optimum is not unique (degenerate)");
    return out;
}

}  // namespace trunkload
