#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trunkload/inverse_dynamics.hpp"
#include "trunkload/kinematics.hpp"
#include "trunkload/model.hpp"

namespace trunkload {

enum class WalkingCase { normal, single_crutch, double_crutch };

enum class Phase {
    // normal
    heel_strike,
    mid_stance,
    toe_off,
    // single crutch, three-point gait
    advance,
    shared_support,
    swing,
    // double crutches, four-point gait
    crutch_advance,
    injured_step,
    healthy_step,
};

std::string_view to_string(WalkingCase c);
std::string_view to_string(Phase p);
std::optional<WalkingCase> parse_walking_case(std::string_view text);

/// Resolves a phase label within a case. For double crutches `advance`
/// names the loaded snapshot (healthy foot lifted), i.e. `healthy_step`.
/// Throws UnknownPhase.
Phase parse_phase(WalkingCase c, std::string_view text);

std::span<const Phase> phases_of(WalkingCase c);
bool phase_belongs_to(WalkingCase c, Phase p);

/// The analysed ("representative") phase of each case.
Phase default_phase(WalkingCase c);

/// Number of crutches a case uses.
int crutch_count(WalkingCase c);

inline constexpr double kDefaultInjuredFootFraction = 0.10;
inline constexpr double kDefaultCrutchShare = 0.30;

struct ScenarioConfig {
    WalkingCase walking_case = WalkingCase::normal;
    Phase phase = Phase::mid_stance;
    Side injured_side = Side::right;
    double injured_foot_fraction = kDefaultInjuredFootFraction;
    double crutch_share = kDefaultCrutchShare;
    std::optional<double> body_weight;  // N; defaults to the model's weight

    /// Throws ConfigError on out-of-range fractions or mismatched phase.
    void validate() const;
};

enum class Contact { left_foot, right_foot, left_crutch, right_crutch };

std::string_view to_string(Contact c);
bool is_crutch(Contact c);

/// Vertical support force on one contact (ground axes).
struct SupportForce {
    Contact contact;
    Vec3 force = Vec3::Zero();
};

/// Splits body weight over the contacts in touch with the floor during the
/// configured phase. Vertical components always sum to W.
std::vector<SupportForce> distribute_loads(const ScenarioConfig& config);

/// Coordinate name -> value, written for a right-side injury.
using PostureTable = std::map<std::string, double>;

/// Shipped phase-posture library (right-side injury, left-hand crutch).
PostureTable default_posture(WalkingCase c, Phase p);

/// Builds a posture from a table, mirroring it for a left-side injury.
/// Coordinates absent from the table are zero. Throws UnknownEntity.
Posture posture_from_table(const Model& model, const PostureTable& table, Side injured_side);

/// FNV-1a over the canonical text of the table; stable across platforms.
std::uint64_t posture_hash(const PostureTable& table);
std::string hash_hex(std::uint64_t hash);

/// Site names used for each contact.
std::string contact_site(Contact c);

struct ScenarioSnapshot {
    ScenarioConfig config;
    Posture posture;
    std::vector<SupportForce> supports;
    std::vector<ExternalLoad> loads;
    std::string description;
    std::uint64_t posture_hash = 0;
    double body_weight = 0.0;
};

/// Posture from the shipped library (or `table` when given) plus support
/// loads at the foot/crutch-tip sites. Throws UnknownPhase, ModelMismatch.
ScenarioSnapshot build_snapshot(const ScenarioConfig& config, const Model& model,
                                const std::optional<PostureTable>& table = std::nullopt);

/// A scenario file: configuration plus an optional posture table.
struct ScenarioDocument {
    ScenarioConfig config;
    std::optional<PostureTable> posture;
};

ScenarioDocument load_scenario(std::string_view document, bool lenient = false);
ScenarioDocument load_scenario_file(const std::filesystem::path& path, bool lenient = false);
std::string dump_scenario(const ScenarioDocument& scenario);

}  // namespace trunkload
