#include "trunkload/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include <Eigen/Eigenvalues>

namespace trunkload {

namespace {

constexpr std::array<std::pair<AnatomicalGroup, std::string_view>, 9> kGroupNames{{
    {AnatomicalGroup::rectus_abdominis, "rectus_abdominis"},
    {AnatomicalGroup::iliacus, "iliacus"},
    {AnatomicalGroup::external_oblique, "external_oblique"},
    {AnatomicalGroup::internal_oblique, "internal_oblique"},
    {AnatomicalGroup::quadratus_lumborum, "quadratus_lumborum"},
    {AnatomicalGroup::iliocostalis, "iliocostalis"},
    {AnatomicalGroup::latissimus_dorsi, "latissimus_dorsi"},
    {AnatomicalGroup::longissimus, "longissimus"},
    {AnatomicalGroup::other, "other"},
}};

template <typename T>
std::optional<std::size_t> find_by_name(const std::vector<T>& items, std::string_view name) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].name == name) return i;
    }
    return std::nullopt;
}

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

int reference_element_count(AnatomicalGroup group) {
    switch (group) {
        case AnatomicalGroup::rectus_abdominis: return 2;
        case AnatomicalGroup::iliacus: return 22;
        case AnatomicalGroup::external_oblique: return 12;
        case AnatomicalGroup::internal_oblique: return 12;
        case AnatomicalGroup::quadratus_lumborum: return 36;
        case AnatomicalGroup::iliocostalis: return 24;
        case AnatomicalGroup::latissimus_dorsi: return 28;
        case AnatomicalGroup::longissimus: return 10;
        case AnatomicalGroup::other: return 0;
    }
    return 0;
}

std::string_view to_string(JointKind kind) {
    switch (kind) {
        case JointKind::revolute: return "revolute";
        case JointKind::prismatic: return "prismatic";
        case JointKind::fixed: return "fixed";
    }
    return "fixed";
}

std::string_view to_string(Side side) {
    switch (side) {
        case Side::left: return "left";
        case Side::right: return "right";
        case Side::midline: return "midline";
    }
    return "midline";
}

std::string_view to_string(AnatomicalGroup group) {
    for (const auto& [g, name] : kGroupNames) {
        if (g == group) return name;
    }
    return "other";
}

std::optional<JointKind> parse_joint_kind(std::string_view text) {
    if (text == "revolute") return JointKind::revolute;
    if (text == "prismatic") return JointKind::prismatic;
    if (text == "fixed") return JointKind::fixed;
    return std::nullopt;
}

std::optional<Side> parse_side(std::string_view text) {
    if (text == "left") return Side::left;
    if (text == "right") return Side::right;
    if (text == "midline") return Side::midline;
    return std::nullopt;
}

std::optional<AnatomicalGroup> parse_anatomical_group(std::string_view text) {
    for (const auto& [g, name] : kGroupNames) {
        if (name == text) return g;
    }
    return std::nullopt;
}

Side opposite(Side side) {
    switch (side) {
        case Side::left: return Side::right;
        case Side::right: return Side::left;
        case Side::midline: return Side::midline;
    }
    return Side::midline;
}

// ---------------------------------------------------------------------------
// Topology

std::vector<Violation> Model::rebuild() {
    std::vector<Violation> out;
    coordinates.clear();
    joint_order.clear();
    joint_first_coordinate.assign(joints.size(), npos);
    joint_parent_segment.assign(joints.size(), npos);
    joint_child_segment.assign(joints.size(), npos);
    segment_parent_joint.assign(segments.size(), npos);
    topology_valid = false;

    if (segments.empty() || segments.front().name != kGroundName) {
        out.push_back({"ground", "ground segment", "segments[0] must be 'ground'"});
        return out;
    }

    for (std::size_t j = 0; j < joints.size(); ++j) {
        const auto& joint = joints[j];
        const auto parent = find_segment(joint.parent);
        const auto child = find_segment(joint.child);
        if (!parent) {
            out.push_back({"joint " + joint.name, "unknown segment", "parent '" + joint.parent + "'"});
        }
        if (!child) {
            out.push_back({"joint " + joint.name, "unknown segment", "child '" + joint.child + "'"});
        }
        if (!parent || !child) continue;
        joint_parent_segment[j] = *parent;
        joint_child_segment[j] = *child;
        if (*child == 0) {
            out.push_back({"joint " + joint.name, "ground is root", "ground cannot be a child"});
            continue;
        }
        if (segment_parent_joint[*child] != npos) {
            out.push_back({"joint " + joint.name, "single parent",
                           "segment '" + joint.child + "' already has parent joint '" +
                               joints[segment_parent_joint[*child]].name + "'"});
            continue;
        }
        segment_parent_joint[*child] = j;
    }

    // Every segment must reach ground through its parent chain.
    std::set<std::size_t> reported_cycle;
    for (std::size_t s = 1; s < segments.size(); ++s) {
        std::vector<std::size_t> chain;
        std::size_t cur = s;
        bool reached = false;
        bool cyclic = false;
        while (true) {
            if (cur == 0) {
                reached = true;
                break;
            }
            if (std::find(chain.begin(), chain.end(), cur) != chain.end()) {
                cyclic = true;
                break;
            }
            chain.push_back(cur);
            const auto pj = segment_parent_joint[cur];
            if (pj == npos) break;
            cur = joint_parent_segment[pj];
        }
        if (reached) continue;
        if (cyclic) {
            const auto loop_begin = std::find(chain.begin(), chain.end(), cur);
            const auto first = *std::min_element(loop_begin, chain.end());
            if (reported_cycle.insert(first).second) {
                std::string names;
                for (auto it = loop_begin; it != chain.end(); ++it) {
                    names += (names.empty() ? "" : " -> ") + segments[*it].name;
                }
                out.push_back({"segment " + segments[first].name, "cycle", names});
            }
        } else if (chain.back() == s) {
            // Root of a detached subtree; its descendants are not reported again.
            out.push_back({"segment " + segments[s].name, "unreachable", "no joint path to ground"});
        }
    }

    if (!out.empty()) return out;

    // Pre-order from ground, children in document order.
    std::vector<std::vector<std::size_t>> child_joints(segments.size());
    for (std::size_t j = 0; j < joints.size(); ++j) child_joints[joint_parent_segment[j]].push_back(j);
    std::function<void(std::size_t)> visit = [&](std::size_t seg) {
        for (auto j : child_joints[seg]) {
            joint_order.push_back(j);
            visit(joint_child_segment[j]);
        }
    };
    visit(0);

    for (auto j : joint_order) {
        const auto& joint = joints[j];
        joint_first_coordinate[j] = coordinates.size();
        if (joint.kind == JointKind::fixed) continue;
        for (std::size_t k = 0; k < joint.axes.size(); ++k) {
            Coordinate c;
            c.name = k < joint.coordinates.size() ? joint.coordinates[k] : joint.name;
            c.joint = j;
            c.axis = k;
            c.kind = joint.kind;
            if (k < joint.limits.size()) c.limits = joint.limits[k];
            coordinates.push_back(std::move(c));
        }
    }
    topology_valid = true;
    return out;
}

double Model::total_mass() const {
    double m = 0.0;
    for (const auto& s : segments) m += s.mass;
    return m;
}

std::optional<std::size_t> Model::find_segment(std::string_view name) const { return find_by_name(segments, name); }
std::optional<std::size_t> Model::find_joint(std::string_view name) const { return find_by_name(joints, name); }
std::optional<std::size_t> Model::find_muscle(std::string_view name) const { return find_by_name(muscles, name); }
std::optional<std::size_t> Model::find_coordinate(std::string_view name) const { return find_by_name(coordinates, name); }
std::optional<std::size_t> Model::find_site(std::string_view name) const { return find_by_name(sites, name); }

std::optional<std::size_t> Model::find_group(std::string_view id) const {
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].id == id) return i;
    }
    return std::nullopt;
}

std::size_t Model::segment_index(std::string_view name) const {
    if (auto i = find_segment(name)) return *i;
    throw UnknownEntity("segment", std::string(name));
}

std::size_t Model::muscle_index(std::string_view name) const {
    if (auto i = find_muscle(name)) return *i;
    throw UnknownEntity("muscle", std::string(name));
}

std::size_t Model::coordinate_index(std::string_view name) const {
    if (auto i = find_coordinate(name)) return *i;
    throw UnknownEntity("coordinate", std::string(name));
}

std::size_t Model::site_index(std::string_view name) const {
    if (auto i = find_site(name)) return *i;
    throw UnknownEntity("site", std::string(name));
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate_model(const Model& model) {
    std::vector<Violation> out;

    std::set<std::string> names;
    for (const auto& s : model.segments) {
        const std::string entity = "segment " + s.name;
        if (!names.insert(s.name).second) out.push_back({entity, "unique name", "duplicate segment name"});
        if (!(s.mass >= 0.0) || !std::isfinite(s.mass)) {
            out.push_back({entity, "mass sign", "mass " + std::to_string(s.mass) + " < 0"});
        }
        if (!finite(s.com) || !s.inertia.allFinite()) {
            out.push_back({entity, "finite", "non-finite com or inertia"});
            continue;
        }
        const double scale = std::max(1.0, s.inertia.cwiseAbs().maxCoeff());
        if ((s.inertia - s.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
            out.push_back({entity, "inertia symmetric", "inertia tensor is not symmetric"});
        } else {
            Eigen::SelfAdjointEigenSolver<Mat3> eig(s.inertia, Eigen::EigenvaluesOnly);
            if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
                out.push_back({entity, "inertia eigenvalues", "negative principal moment"});
            }
        }
    }

    std::set<std::string> joint_names;
    std::set<std::string> coord_names;
    for (const auto& j : model.joints) {
        const std::string entity = "joint " + j.name;
        if (!joint_names.insert(j.name).second) out.push_back({entity, "unique name", "duplicate joint name"});
        if (!finite(j.anchor_parent) || !finite(j.anchor_child)) {
            out.push_back({entity, "finite", "non-finite anchor"});
        }
        if (j.kind == JointKind::fixed) {
            if (!j.axes.empty()) out.push_back({entity, "fixed joint axes", "fixed joints carry no coordinates"});
            continue;
        }
        if (j.axes.empty()) out.push_back({entity, "axis count", "moving joint without axis"});
        if (j.coordinates.size() != j.axes.size()) {
            out.push_back({entity, "coordinate names", "one coordinate name per axis required"});
        }
        for (const auto& a : j.axes) {
            if (!finite(a) || std::abs(a.norm() - 1.0) > 1e-9) {
                out.push_back({entity, "axis norm",
                               "|axis| = " + std::to_string(a.norm()) + ", expected 1"});
            }
        }
        for (const auto& c : j.coordinates) {
            if (!coord_names.insert(c).second) out.push_back({entity, "unique name", "duplicate coordinate '" + c + "'"});
        }
        for (const auto& lim : j.limits) {
            if (lim && !(lim->min <= lim->max)) out.push_back({entity, "limits order", "min > max"});
        }
    }

    // Tree structure.
    Model copy = model;
    for (auto& v : copy.rebuild()) out.push_back(std::move(v));

    std::set<std::string> group_ids;
    for (const auto& g : model.groups) {
        const std::string entity = "group " + g.id;
        if (!group_ids.insert(g.id).second) out.push_back({entity, "unique name", "duplicate group id"});
        if (g.anatomical_name != AnatomicalGroup::other &&
            g.paper_element_count != reference_element_count(g.anatomical_name)) {
            out.push_back({entity, "reference element count",
                           std::to_string(g.paper_element_count) + " != " +
                               std::to_string(reference_element_count(g.anatomical_name))});
        }
    }

    std::set<std::string> muscle_names;
    for (const auto& m : model.muscles) {
        const std::string entity = "muscle " + m.name;
        if (!muscle_names.insert(m.name).second) out.push_back({entity, "unique name", "duplicate muscle name"});
        if (!(m.f_max > 0.0) || !std::isfinite(m.f_max)) {
            out.push_back({entity, "f_max sign", "f_max " + std::to_string(m.f_max) + " <= 0"});
        }
        if (m.path.size() < 2) out.push_back({entity, "path length", "fewer than 2 path points"});
        for (const auto& p : m.path) {
            if (!model.find_segment(p.segment)) {
                out.push_back({entity, "unknown segment", "path point on '" + p.segment + "'"});
            }
            if (!finite(p.point)) out.push_back({entity, "finite", "non-finite path point"});
        }
        if (!model.find_group(m.group)) out.push_back({entity, "unknown group", "'" + m.group + "'"});
        const std::string mirrored = mirror_name(m.name);
        if (mirrored != m.name) {
            const bool left_suffix = m.name.ends_with("_l");
            if ((left_suffix && m.side != Side::left) || (!left_suffix && m.side != Side::right)) {
                out.push_back({entity, "side naming", "suffix disagrees with side"});
            }
        }
    }

    std::set<std::string> site_names;
    for (const auto& s : model.sites) {
        const std::string entity = "site " + s.name;
        if (!site_names.insert(s.name).second) out.push_back({entity, "unique name", "duplicate site name"});
        if (!model.find_segment(s.segment)) out.push_back({entity, "unknown segment", "'" + s.segment + "'"});
    }

    if (!finite(model.gravity)) out.push_back({"gravity", "finite", "non-finite gravity"});
    return out;
}

// ---------------------------------------------------------------------------
// Crutches

namespace {

Vec3 site_in_ground_reference(const Model& model, const Site& site) {
    // Reference configuration: every joint at zero, so placements are pure
    // translations accumulated along the parent chain.
    Vec3 p = site.point;
    std::size_t seg = model.segment_index(site.segment);
    while (seg != 0) {
        const auto j = model.segment_parent_joint[seg];
        const auto& joint = model.joints[j];
        p = joint.anchor_parent + (p - joint.anchor_child);
        seg = model.joint_parent_segment[j];
    }
    return p;
}

void add_crutch(Model& model, Side side, const CrutchConfig& config) {
    const std::string suffix = side == Side::left ? "_l" : "_r";
    const std::string hand_name = "hand" + suffix;
    const auto hand = model.find_site(hand_name);
    if (!hand) throw ModelMismatch("model has no hand attachment site '" + hand_name + "'");
    const Site hand_site = model.sites[*hand];

    double length = config.length;
    if (length <= 0.0) {
        length = site_in_ground_reference(model, hand_site).y();
        if (length <= 0.0) throw ConfigError("hand site '" + hand_name + "' is not above the floor");
    }

    BodySegment crutch;
    crutch.name = "crutch" + suffix;
    crutch.mass = config.mass;
    crutch.com = Vec3(0.0, -0.5 * length, 0.0);
    if (config.mass > 0.0) {
        // Slender rod about its centre.
        const double i_perp = config.mass * length * length / 12.0;
        crutch.inertia = Vec3(i_perp, 0.0, i_perp).asDiagonal();
    }
    model.segments.push_back(crutch);

    JointDef joint;
    joint.name = "crutch" + suffix;
    joint.parent = hand_site.segment;
    joint.child = crutch.name;
    joint.kind = JointKind::revolute;
    // Sagittal swing (tip forward positive), then frontal swing (tip lateral
    // positive); the right frontal axis is the mirror of the left one.
    joint.axes = {Vec3(-1.0, 0.0, 0.0), Vec3(0.0, 0.0, side == Side::left ? 1.0 : -1.0)};
    joint.coordinates = {"crutch_flexion" + suffix, "crutch_abduction" + suffix};
    joint.anchor_parent = hand_site.point;
    joint.anchor_child = Vec3::Zero();
    joint.limits = {Limits{-1.0, 1.0}, Limits{-0.6, 0.6}};
    model.joints.push_back(joint);

    model.sites.push_back({"crutch_tip" + suffix, crutch.name, Vec3(0.0, -length, 0.0)});
}

}  // namespace

Model attach_crutches(const Model& model, const CrutchConfig& config) {
    if (config.count < 0 || config.count > 2) {
        throw ConfigError("crutch count must be 0, 1 or 2 (got " + std::to_string(config.count) + ")");
    }
    if (config.injured_side == Side::midline) throw ConfigError("injured side must be left or right");
    if (config.count == 0) return model;
    if (!model.topology_valid) throw ModelMismatch("crutches require a model with a valid topology");

    Model out = model;
    if (config.count == 1) {
        const Side side = config.single_crutch_side.value_or(opposite(config.injured_side));
        if (side == config.injured_side) {
            throw ConfigError("a single crutch must be held on the non-injured side (injured: " +
                              std::string(to_string(config.injured_side)) + ")");
        }
        if (side == Side::midline) throw ConfigError("crutch side must be left or right");
        add_crutch(out, side, config);
    } else {
        add_crutch(out, Side::left, config);
        add_crutch(out, Side::right, config);
    }
    auto violations = out.rebuild();
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return out;
}

// ---------------------------------------------------------------------------
// Mirror symmetry

std::string mirror_name(std::string_view name) {
    std::string out(name);
    if (out.ends_with("_l")) {
        out.back() = 'r';
    } else if (out.ends_with("_r")) {
        out.back() = 'l';
    }
    return out;
}

double mirror_sign(const Model& model, std::size_t from, std::size_t to) {
    const auto& c = model.coordinates.at(from);
    const auto& pc = model.coordinates.at(to);
    if (pc.kind != c.kind || pc.axis != c.axis) {
        throw ConfigError("coordinate '" + c.name + "' mirror counterpart differs in kind");
    }
    const Vec3 axis = model.joints[c.joint].axes[c.axis];
    const Vec3 mirrored = c.kind == JointKind::revolute ? mirror_axial(axis) : mirror_point(axis);
    const Vec3& target = model.joints[pc.joint].axes[pc.axis];
    if ((mirrored - target).norm() < 1e-12) return 1.0;
    if ((mirrored + target).norm() < 1e-12) return -1.0;
    throw ConfigError("coordinate '" + c.name + "' axis is not the mirror of '" + pc.name + "'");
}

MirrorMap mirror_map(const Model& model) {
    if (!model.topology_valid) throw ConfigError("mirror map requires a valid topology");
    MirrorMap map;
    const auto n = model.coordinate_count();
    map.partner.assign(n, Model::npos);
    map.sign.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = model.coordinates[i];
        const auto partner = model.find_coordinate(mirror_name(c.name));
        if (!partner) throw ConfigError("coordinate '" + c.name + "' has no mirror counterpart");
        map.partner[i] = *partner;
        map.sign[i] = mirror_sign(model, i, *partner);
    }
    return map;
}

std::vector<Violation> check_muscle_mirror(const Model& model, double tolerance) {
    std::vector<Violation> out;
    for (const auto& m : model.muscles) {
        if (m.side != Side::left) continue;
        const std::string entity = "muscle " + m.name;
        std::size_t matches = 0;
        for (const auto& r : model.muscles) {
            if (r.side != Side::right || r.name != mirror_name(m.name)) continue;
            ++matches;
            if (r.f_max != m.f_max) out.push_back({entity, "mirror f_max", "differs from " + r.name});
            if (r.group != m.group) out.push_back({entity, "mirror group", "differs from " + r.name});
            if (r.path.size() != m.path.size()) {
                out.push_back({entity, "mirror path", "point count differs from " + r.name});
                continue;
            }
            for (std::size_t k = 0; k < m.path.size(); ++k) {
                if (r.path[k].segment != mirror_name(m.path[k].segment) ||
                    (r.path[k].point - mirror_point(m.path[k].point)).cwiseAbs().maxCoeff() > tolerance) {
                    out.push_back({entity, "mirror path", "point " + std::to_string(k) + " differs from " + r.name});
                }
            }
        }
        if (matches != 1) out.push_back({entity, "mirror partner", std::to_string(matches) + " right counterparts"});
    }
    for (const auto& r : model.muscles) {
        if (r.side == Side::right && !model.find_muscle(mirror_name(r.name))) {
            out.push_back({"muscle " + r.name, "mirror partner", "no left counterpart"});
        }
    }
    return out;
}

}  // namespace trunkload
