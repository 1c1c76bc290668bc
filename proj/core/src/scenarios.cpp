#include "trunkload/scenarios.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace trunkload {

namespace {

constexpr std::array kNormalPhases{Phase::heel_strike, Phase::mid_stance, Phase::toe_off};
constexpr std::array kSinglePhases{Phase::advance, Phase::shared_support, Phase::swing};
constexpr std::array kDoublePhases{Phase::crutch_advance, Phase::injured_step, Phase::healthy_step};

constexpr std::array<std::pair<Phase, std::string_view>, 9> kPhaseNames{{
    {Phase::heel_strike, "heel_strike"},
    {Phase::mid_stance, "mid_stance"},
    {Phase::toe_off, "toe_off"},
    {Phase::advance, "advance"},
    {Phase::shared_support, "shared_support"},
    {Phase::swing, "swing"},
    {Phase::crutch_advance, "crutch_advance"},
    {Phase::injured_step, "injured_step"},
    {Phase::healthy_step, "healthy_step"},
}};

Contact foot(Side side) { return side == Side::left ? Contact::left_foot : Contact::right_foot; }
Contact crutch(Side side) { return side == Side::left ? Contact::left_crutch : Contact::right_crutch; }

SupportForce vertical(Contact c, double newtons) { return {c, Vec3(0.0, newtons, 0.0)}; }

}  // namespace

std::string_view to_string(WalkingCase c) {
    switch (c) {
        case WalkingCase::normal: return "normal";
        case WalkingCase::single_crutch: return "single_crutch";
        case WalkingCase::double_crutch: return "double_crutch";
    }
    return "normal";
}

std::string_view to_string(Phase p) {
    for (const auto& [phase, name] : kPhaseNames) {
        if (phase == p) return name;
    }
    return "mid_stance";
}

std::string_view to_string(Contact c) {
    switch (c) {
        case Contact::left_foot: return "left_foot";
        case Contact::right_foot: return "right_foot";
        case Contact::left_crutch: return "left_crutch";
        case Contact::right_crutch: return "right_crutch";
    }
    return "left_foot";
}

bool is_crutch(Contact c) { return c == Contact::left_crutch || c == Contact::right_crutch; }

std::optional<WalkingCase> parse_walking_case(std::string_view text) {
    if (text == "normal") return WalkingCase::normal;
    if (text == "single_crutch") return WalkingCase::single_crutch;
    if (text == "double_crutch") return WalkingCase::double_crutch;
    return std::nullopt;
}

std::span<const Phase> phases_of(WalkingCase c) {
    switch (c) {
        case WalkingCase::normal: return kNormalPhases;
        case WalkingCase::single_crutch: return kSinglePhases;
        case WalkingCase::double_crutch: return kDoublePhases;
    }
    return kNormalPhases;
}

bool phase_belongs_to(WalkingCase c, Phase p) {
    for (auto q : phases_of(c)) {
        if (q == p) return true;
    }
    return false;
}

Phase parse_phase(WalkingCase c, std::string_view text) {
    if (c == WalkingCase::double_crutch && text == "advance") return Phase::healthy_step;
    for (auto p : phases_of(c)) {
        if (to_string(p) == text) return p;
    }
    std::string allowed;
    for (auto p : phases_of(c)) allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(p));
    throw UnknownPhase("phase '" + std::string(text) + "' is not defined for case " +
                       std::string(to_string(c)) + " (expected one of: " + allowed + ")");
}

Phase default_phase(WalkingCase c) {
    switch (c) {
        case WalkingCase::normal: return Phase::mid_stance;
        case WalkingCase::single_crutch: return Phase::shared_support;
        case WalkingCase::double_crutch: return Phase::healthy_step;
    }
    return Phase::mid_stance;
}

int crutch_count(WalkingCase c) {
    switch (c) {
        case WalkingCase::normal: return 0;
        case WalkingCase::single_crutch: return 1;
        case WalkingCase::double_crutch: return 2;
    }
    return 0;
}

void ScenarioConfig::validate() const {
    if (!(injured_foot_fraction >= 0.0 && injured_foot_fraction <= 1.0)) {
        throw ConfigError("injured_foot_fraction must lie in [0, 1] (got " + std::to_string(injured_foot_fraction) + ")");
    }
    if (!(crutch_share >= 0.0 && crutch_share <= 1.0)) {
        throw ConfigError("crutch_share must lie in [0, 1] (got " + std::to_string(crutch_share) + ")");
    }
    if (injured_side == Side::midline) throw ConfigError("injured_side must be left or right");
    if (body_weight && !(*body_weight > 0.0 && std::isfinite(*body_weight))) {
        throw ConfigError("body_weight must be positive");
    }
    if (!phase_belongs_to(walking_case, phase)) {
        throw UnknownPhase("phase '" + std::string(to_string(phase)) + "' is not defined for case " +
                           std::string(to_string(walking_case)));
    }
}

std::vector<SupportForce> distribute_loads(const ScenarioConfig& config) {
    config.validate();
    if (!config.body_weight) throw ConfigError("distribute_loads requires body_weight");
    const double w = *config.body_weight;
    const double f = config.injured_foot_fraction;
    const double kappa = config.crutch_share;
    const Side injured = config.injured_side;
    const Side healthy = opposite(injured);

    const double injured_load = f * w;
    std::vector<SupportForce> out;
    switch (config.phase) {
        case Phase::heel_strike:
        case Phase::toe_off:
            out = {vertical(foot(injured), 0.5 * w), vertical(foot(healthy), w - 0.5 * w)};
            break;
        case Phase::mid_stance:
        case Phase::advance:
            out = {vertical(foot(healthy), w)};
            break;
        case Phase::shared_support: {
            const double crutch_load = kappa * (w - injured_load);
            out = {vertical(foot(injured), injured_load), vertical(crutch(healthy), crutch_load),
                   vertical(foot(healthy), w - injured_load - crutch_load)};
            break;
        }
        case Phase::swing:
            out = {vertical(foot(injured), injured_load), vertical(crutch(healthy), w - injured_load)};
            break;
        case Phase::crutch_advance: {
            // Healthy-side crutch in the air; the other crutch shares with the feet.
            const double crutch_load = kappa * (w - injured_load);
            out = {vertical(foot(injured), injured_load), vertical(crutch(injured), crutch_load),
                   vertical(foot(healthy), w - injured_load - crutch_load)};
            break;
        }
        case Phase::injured_step: {
            const double each = 0.5 * kappa * w;
            out = {vertical(foot(healthy), w - 2.0 * each), vertical(crutch(Side::left), each),
                   vertical(crutch(Side::right), each)};
            break;
        }
        case Phase::healthy_step: {
            const double each = 0.5 * (w - injured_load);
            out = {vertical(foot(injured), injured_load), vertical(crutch(Side::left), each),
                   vertical(crutch(Side::right), each)};
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Phase-posture library. Angles in radians for a right-side injury; the
// single crutch is held in the left hand. Unlisted coordinates are zero.

PostureTable default_posture(WalkingCase c, Phase p) {
    if (!phase_belongs_to(c, p)) {
        throw UnknownPhase("phase '" + std::string(to_string(p)) + "' is not defined for case " + std::string(to_string(c)));
    }
    switch (p) {
        case Phase::heel_strike:
            return {{"lumbar_flexion", 0.04}, {"hip_flexion_r", 0.35}, {"knee_angle_r", 0.05},
                    {"hip_flexion_l", -0.20}, {"knee_angle_l", 0.10}, {"ankle_angle_l", 0.10},
                    {"shoulder_flexion_l", 0.15}, {"shoulder_flexion_r", -0.15}};
        case Phase::mid_stance:
            return {{"lumbar_flexion", 0.03}};
        case Phase::toe_off:
            return {{"lumbar_flexion", 0.04}, {"hip_flexion_r", 0.20}, {"knee_angle_r", 0.10},
                    {"hip_flexion_l", -0.30}, {"knee_angle_l", 0.35}, {"ankle_angle_l", -0.20},
                    {"shoulder_flexion_l", -0.15}, {"shoulder_flexion_r", 0.15}};
        case Phase::advance:
            return {{"lumbar_flexion", 0.06}, {"hip_flexion_r", 0.30}, {"knee_angle_r", 0.40},
                    {"shoulder_flexion_l", 0.35}, {"crutch_flexion_l", 0.10}};
        case Phase::shared_support:
            return {{"lumbar_flexion", 0.15}, {"lumbar_bending", -0.04},
                    {"hip_flexion_r", 0.25}, {"knee_angle_r", 0.05}, {"ankle_angle_r", -0.05},
                    {"hip_flexion_l", -0.15}, {"ankle_angle_l", 0.15},
                    {"shoulder_flexion_l", 0.20}, {"shoulder_abduction_l", 0.40},
                    {"crutch_flexion_l", -0.20}, {"crutch_abduction_l", -0.30}};
        case Phase::swing:
            return {{"lumbar_flexion", 0.08}, {"hip_flexion_r", 0.25},
                    {"hip_flexion_l", 0.10}, {"knee_angle_l", 0.50},
                    {"shoulder_flexion_l", 0.10}, {"shoulder_abduction_l", 0.10},
                    {"crutch_flexion_l", -0.05}, {"crutch_abduction_l", 0.10}};
        case Phase::crutch_advance:
            return {{"lumbar_flexion", 0.08}, {"hip_flexion_r", 0.10}, {"hip_flexion_l", -0.10},
                    {"shoulder_flexion_l", 0.30}, {"shoulder_flexion_r", 0.15},
                    {"crutch_flexion_r", 0.05}};
        case Phase::injured_step:
            return {{"lumbar_flexion", 0.10}, {"hip_flexion_r", 0.30}, {"knee_angle_r", 0.30},
                    {"shoulder_flexion_l", 0.20}, {"shoulder_flexion_r", 0.20},
                    {"crutch_flexion_l", 0.05}, {"crutch_flexion_r", 0.05}};
        case Phase::healthy_step:
            return {{"lumbar_flexion", 0.12},
                    {"shoulder_flexion_l", 0.30}, {"shoulder_flexion_r", 0.30},
                    {"crutch_flexion_l", -0.25}, {"crutch_flexion_r", -0.25}};
    }
    return {};
}

Posture posture_from_table(const Model& model, const PostureTable& table, Side injured_side) {
    Posture posture = Posture::zero(model);
    for (const auto& [name, value] : table) {
        if (!std::isfinite(value)) throw ConfigError("posture value for '" + name + "' is not finite");
        if (injured_side != Side::left) {
            posture.q[static_cast<Eigen::Index>(model.coordinate_index(name))] = value;
            continue;
        }
        const auto target = model.coordinate_index(mirror_name(name));
        double sign = 1.0;
        // A one-sided crutch has no counterpart here; attach_crutches builds
        // both sides as exact mirrors, so the sign is +1.
        if (const auto source = model.find_coordinate(name)) sign = mirror_sign(model, *source, target);
        posture.q[static_cast<Eigen::Index>(target)] = sign * value;
    }
    return posture;
}

std::uint64_t posture_hash(const PostureTable& table) {
    std::uint64_t h = 14695981039346656037ull;
    auto feed = [&h](std::string_view text) {
        for (unsigned char ch : text) {
            h ^= ch;
            h *= 1099511628211ull;
        }
    };
    char buf[64];
    for (const auto& [name, value] : table) {
        feed(name);
        std::snprintf(buf, sizeof buf, "=%.17g;", value);
        feed(buf);
    }
    return h;
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string contact_site(Contact c) {
    switch (c) {
        case Contact::left_foot: return "foot_l";
        case Contact::right_foot: return "foot_r";
        case Contact::left_crutch: return "crutch_tip_l";
        case Contact::right_crutch: return "crutch_tip_r";
    }
    return "foot_l";
}

ScenarioSnapshot build_snapshot(const ScenarioConfig& config, const Model& model,
                                const std::optional<PostureTable>& table) {
    config.validate();
    if (!model.topology_valid) throw ModelMismatch("model topology is not valid");

    ScenarioSnapshot snap;
    snap.config = config;
    double own_weight = 0.0;
    for (const auto& s : model.segments) {
        if (!s.name.starts_with("crutch")) own_weight += s.mass;
    }
    own_weight *= model.gravity.norm();
    snap.body_weight = config.body_weight.value_or(own_weight);
    snap.config.body_weight = snap.body_weight;

    snap.supports = distribute_loads(snap.config);
    for (const auto& s : snap.supports) {
        const auto site = contact_site(s.contact);
        if (!model.find_site(site)) {
            if (is_crutch(s.contact)) {
                throw ModelMismatch("case " + std::string(to_string(config.walking_case)) + " needs crutch site '" +
                                    site + "'; attach crutches to the model first");
            }
            throw ModelMismatch("model has no contact site '" + site + "'");
        }
    }

    const PostureTable posture_table = table.value_or(default_posture(config.walking_case, config.phase));
    snap.posture = posture_from_table(model, posture_table, config.injured_side);
    snap.posture_hash = posture_hash(posture_table);

    std::ostringstream desc;
    desc.setf(std::ios::fixed);
    desc.precision(1);
    desc << to_string(config.walking_case) << "/" << to_string(config.phase) << ":";
    for (const auto& s : snap.supports) {
        const auto& site = model.sites[model.site_index(contact_site(s.contact))];
        snap.loads.push_back({site.segment, site.point, s.force, Vec3::Zero()});
        desc << " " << to_string(s.contact) << " " << s.force.y() << " N";
    }
    snap.description = desc.str();
    return snap;
}

}  // namespace trunkload
