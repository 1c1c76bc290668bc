#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trunkload/errors.hpp"
#include "trunkload/spatial.hpp"

namespace trunkload {

inline constexpr std::string_view kGroundName = "ground";

enum class JointKind { revolute, prismatic, fixed };
enum class Side { left, right, midline };

/// The eight analysed trunk groups plus a bucket for everything else.
enum class AnatomicalGroup {
    rectus_abdominis,
    iliacus,
    external_oblique,
    internal_oblique,
    quadratus_lumborum,
    iliocostalis,
    latissimus_dorsi,
    longissimus,
    other,
};

inline constexpr AnatomicalGroup kTrunkGroups[] = {
    AnatomicalGroup::rectus_abdominis,   AnatomicalGroup::iliacus,
    AnatomicalGroup::external_oblique,   AnatomicalGroup::internal_oblique,
    AnatomicalGroup::quadratus_lumborum, AnatomicalGroup::iliocostalis,
    AnatomicalGroup::latissimus_dorsi,   AnatomicalGroup::longissimus,
};

/// Element counts of the full-body reference model, per trunk group.
int reference_element_count(AnatomicalGroup group);

std::string_view to_string(JointKind kind);
std::string_view to_string(Side side);
std::string_view to_string(AnatomicalGroup group);
std::optional<JointKind> parse_joint_kind(std::string_view text);
std::optional<Side> parse_side(std::string_view text);
std::optional<AnatomicalGroup> parse_anatomical_group(std::string_view text);
Side opposite(Side side);

struct Limits {
    double min = 0.0;
    double max = 0.0;
    bool operator==(const Limits&) const = default;
};

struct BodySegment {
    std::string name;
    double mass = 0.0;
    Vec3 com = Vec3::Zero();
    Mat3 inertia = Mat3::Zero();
    bool operator==(const BodySegment&) const = default;
};

/// A joint between two segments. Revolute and prismatic joints carry one
/// generalized coordinate per axis; multi-axis revolute joints compose their
/// rotations in listed order (intrinsic). Axes are expressed in the parent
/// frame at the anchor point.
struct JointDef {
    std::string name;
    std::string parent;
    std::string child;
    JointKind kind = JointKind::fixed;
    std::vector<Vec3> axes;
    std::vector<std::string> coordinates;
    Vec3 anchor_parent = Vec3::Zero();
    Vec3 anchor_child = Vec3::Zero();
    std::vector<std::optional<Limits>> limits;
    bool operator==(const JointDef&) const = default;
};

struct PathPoint {
    std::string segment;
    Vec3 point = Vec3::Zero();
    bool operator==(const PathPoint&) const = default;
};

struct MuscleElement {
    std::string name;
    std::string group;
    Side side = Side::midline;
    std::vector<PathPoint> path;
    double f_max = 0.0;
    bool operator==(const MuscleElement&) const = default;
};

struct MuscleGroup {
    std::string id;
    AnatomicalGroup anatomical_name = AnatomicalGroup::other;
    int paper_element_count = 0;
    bool operator==(const MuscleGroup&) const = default;
};

/// Named point on a segment: hand attachment frames, foot contacts, crutch tips.
struct Site {
    std::string name;
    std::string segment;
    Vec3 point = Vec3::Zero();
    bool operator==(const Site&) const = default;
};

struct Coordinate {
    std::string name;
    std::size_t joint = 0;
    std::size_t axis = 0;
    JointKind kind = JointKind::revolute;
    std::optional<Limits> limits;
    bool operator==(const Coordinate&) const = default;
};

/// Musculoskeletal model. `segments[0]` is always ground. The topology block
/// (`coordinates`, `joint_order`, ...) is derived by `rebuild()`; models from
/// `load_model` and `attach_crutches` are already rebuilt and are treated as
/// immutable values afterwards.
struct Model {
    std::vector<BodySegment> segments;
    std::vector<JointDef> joints;
    std::vector<MuscleElement> muscles;
    std::vector<MuscleGroup> groups;
    std::vector<Site> sites;
    Vec3 gravity{0.0, -9.81, 0.0};

    // derived
    std::vector<Coordinate> coordinates;
    std::vector<std::size_t> joint_order;          // tree pre-order
    std::vector<std::size_t> joint_first_coordinate;
    std::vector<std::size_t> joint_parent_segment;
    std::vector<std::size_t> joint_child_segment;
    std::vector<std::size_t> segment_parent_joint;  // npos for ground / orphans
    bool topology_valid = false;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Re-derives the topology block. Returns the tree violations found
    /// (cycles, orphans, dangling names); on violations the coordinate list is
    /// left empty and `topology_valid` is false.
    std::vector<Violation> rebuild();

    std::size_t coordinate_count() const { return coordinates.size(); }
    double total_mass() const;

    std::optional<std::size_t> find_segment(std::string_view name) const;
    std::optional<std::size_t> find_joint(std::string_view name) const;
    std::optional<std::size_t> find_muscle(std::string_view name) const;
    std::optional<std::size_t> find_coordinate(std::string_view name) const;
    std::optional<std::size_t> find_group(std::string_view id) const;
    std::optional<std::size_t> find_site(std::string_view name) const;

    // Throwing variants (UnknownEntity).
    std::size_t segment_index(std::string_view name) const;
    std::size_t muscle_index(std::string_view name) const;
    std::size_t coordinate_index(std::string_view name) const;
    std::size_t site_index(std::string_view name) const;

    bool operator==(const Model&) const = default;
};

struct LoadOptions {
    bool lenient = false;  // ignore unknown fields instead of failing
};

/// Parses and validates a model document. Throws ParseError or ValidationError.
Model load_model(std::string_view document, const LoadOptions& options = {});
Model load_model_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Serializes a model back to the document format (canonical key order).
std::string dump_model(const Model& model);

/// All invariant violations; empty iff the model is valid.
std::vector<Violation> validate_model(const Model& model);

struct CrutchConfig {
    int count = 0;                          // 0, 1 or 2
    Side injured_side = Side::right;
    std::optional<Side> single_crutch_side; // defaults to the non-injured side
    double length = 0.0;                    // <= 0: reach the floor from the hand
    double mass = 0.0;
};

/// Returns a copy of `model` with crutch segments hung from the hand sites,
/// each on a two-coordinate (sagittal + frontal swing) joint.
Model attach_crutches(const Model& model, const CrutchConfig& config);

/// Name of the bilateral counterpart (`_l` <-> `_r` suffix); unchanged when
/// the name carries no side suffix.
std::string mirror_name(std::string_view name);

/// Coordinate correspondence under sagittal reflection: mirrored posture
/// q'[partner[i]] = sign[i] * q[i].
struct MirrorMap {
    std::vector<std::size_t> partner;
    std::vector<double> sign;
};

/// Throws ConfigError when the joint set is not bilaterally symmetric.
MirrorMap mirror_map(const Model& model);

/// +1 or -1 relating coordinate `from` to its mirror `to`; ConfigError when
/// the axes are not reflections of each other.
double mirror_sign(const Model& model, std::size_t from, std::size_t to);

/// Mirror-symmetry check of the muscle set: every left element has exactly
/// one right counterpart with equal f_max and x-mirrored path.
std::vector<Violation> check_muscle_mirror(const Model& model, double tolerance = 1e-12);

}  // namespace trunkload
