#include <fstream>
#include <sstream>

#include "json_reader.hpp"
#include "trunkload/model.hpp"

namespace trunkload {

using detail::json;
using detail::ObjectReader;

namespace {

std::string indexed(std::string_view section, std::size_t i) {
    return std::string(section) + "[" + std::to_string(i) + "]";
}

Mat3 read_inertia(const ObjectReader& r) {
    if (!r.has("inertia")) return Mat3::Zero();
    const auto& v = r.at("inertia");
    const auto path = r.field("inertia");
    if (!v.is_array()) throw ParseError("expected 3 principal moments or a 3x3 matrix", 0, path);
    if (v.size() == 3 && v[0].is_number()) {
        return ObjectReader::as_vec3(v, path).asDiagonal();
    }
    if (v.size() != 3) throw ParseError("expected 3 principal moments or a 3x3 matrix", 0, path);
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
        m.row(i) = ObjectReader::as_vec3(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]").transpose();
    }
    return m;
}

std::optional<Limits> read_limit(const json& v, const std::string& path) {
    if (v.is_null()) return std::nullopt;
    if (!v.is_array() || v.size() != 2) throw ParseError("expected [min, max] or null", 0, path);
    return Limits{ObjectReader::as_number(v[0], path + "[0]"), ObjectReader::as_number(v[1], path + "[1]")};
}

BodySegment read_segment(const json& node, const std::string& path, bool lenient) {
    ObjectReader r(node, path, lenient);
    r.allow_only({"name", "mass", "com", "inertia"});
    BodySegment s;
    s.name = r.string("name");
    s.mass = r.number_or("mass", 0.0);
    s.com = r.vec3_or("com", Vec3::Zero());
    s.inertia = read_inertia(r);
    return s;
}

JointDef read_joint(const json& node, const std::string& path, bool lenient) {
    ObjectReader r(node, path, lenient);
    r.allow_only({"name", "parent", "child", "kind", "axis", "axes", "coordinates", "anchor_parent",
                  "anchor_child", "limits"});
    JointDef j;
    j.name = r.string("name");
    j.parent = r.string("parent");
    j.child = r.string("child");
    const auto kind = parse_joint_kind(r.string("kind"));
    if (!kind) r.fail("expected one of revolute, prismatic, fixed", "kind");
    j.kind = *kind;
    j.anchor_parent = r.vec3_or("anchor_parent", Vec3::Zero());
    j.anchor_child = r.vec3_or("anchor_child", Vec3::Zero());

    if (r.has("axis") && r.has("axes")) r.fail("give either 'axis' or 'axes', not both", "axes");
    if (r.has("axis")) {
        j.axes.push_back(r.vec3("axis"));
    } else if (r.has("axes")) {
        const auto& axes = r.at("axes");
        if (!axes.is_array()) r.fail("expected an array of 3-vectors", "axes");
        for (std::size_t k = 0; k < axes.size(); ++k) {
            j.axes.push_back(ObjectReader::as_vec3(axes[k], r.field("axes") + "[" + std::to_string(k) + "]"));
        }
    } else if (j.kind != JointKind::fixed) {
        r.fail("missing required field", "axis");
    }

    if (r.has("coordinates")) {
        const auto& names = r.at("coordinates");
        if (!names.is_array()) r.fail("expected an array of names", "coordinates");
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (!names[k].is_string()) r.fail("expected a string", "coordinates[" + std::to_string(k) + "]");
            j.coordinates.push_back(names[k].get<std::string>());
        }
    } else if (j.kind != JointKind::fixed && j.axes.size() == 1) {
        j.coordinates.push_back(j.name);
    } else if (j.kind != JointKind::fixed) {
        r.fail("multi-axis joints must name their coordinates", "coordinates");
    }

    if (r.has("limits")) {
        const auto& lim = r.at("limits");
        const auto path_l = r.field("limits");
        if (!lim.is_array()) r.fail("expected [min, max] or a list of them", "limits");
        if (lim.size() == 2 && lim[0].is_number()) {
            j.limits.push_back(read_limit(lim, path_l));
        } else {
            for (std::size_t k = 0; k < lim.size(); ++k) j.limits.push_back(read_limit(lim[k], path_l + "[" + std::to_string(k) + "]"));
        }
        if (j.limits.size() != j.axes.size()) r.fail("one limit entry per coordinate required", "limits");
    }
    return j;
}

MuscleElement read_muscle(const json& node, const std::string& path, bool lenient) {
    ObjectReader r(node, path, lenient);
    r.allow_only({"name", "group", "side", "path", "f_max"});
    MuscleElement m;
    m.name = r.string("name");
    m.group = r.string("group");
    const auto side = parse_side(r.string("side"));
    if (!side) r.fail("expected one of left, right, midline", "side");
    m.side = *side;
    m.f_max = r.number("f_max");
    const auto& pts = r.require("path");
    if (!pts.is_array()) r.fail("expected an array of path points", "path");
    for (std::size_t k = 0; k < pts.size(); ++k) {
        ObjectReader p(pts[k], r.field("path") + "[" + std::to_string(k) + "]", lenient);
        p.allow_only({"segment", "point"});
        m.path.push_back({p.string("segment"), p.vec3("point")});
    }
    return m;
}

MuscleGroup read_group(const json& node, const std::string& path, bool lenient) {
    ObjectReader r(node, path, lenient);
    r.allow_only({"id", "anatomical_name", "paper_element_count"});
    MuscleGroup g;
    g.id = r.string("id");
    const auto name = parse_anatomical_group(r.string("anatomical_name"));
    if (!name) r.fail("unknown anatomical group", "anatomical_name");
    g.anatomical_name = *name;
    g.paper_element_count = r.has("paper_element_count") ? r.integer("paper_element_count") : 0;
    return g;
}

Site read_site(const json& node, const std::string& path, bool lenient) {
    ObjectReader r(node, path, lenient);
    r.allow_only({"name", "segment", "point"});
    return {r.string("name"), r.string("segment"), r.vec3_or("point", Vec3::Zero())};
}

template <typename T, typename Fn>
std::vector<T> read_section(const ObjectReader& root, std::string_view key, bool required, Fn&& fn) {
    std::vector<T> out;
    if (!root.has(key)) {
        if (required) root.fail("missing required section", key);
        return out;
    }
    const auto& arr = root.at(key);
    if (!arr.is_array()) root.fail("expected an array", key);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(fn(arr[i], indexed(key, i), root.lenient()));
    return out;
}

}  // namespace

Model load_model(std::string_view document, const LoadOptions& options) {
    const json doc = detail::parse_document(document);
    ObjectReader root(doc, "", options.lenient);
    root.allow_only({"segments", "joints", "muscles", "groups", "sites", "gravity"});

    Model model;
    model.gravity = root.vec3_or("gravity", Vec3(0.0, -9.81, 0.0));

    auto segments = read_section<BodySegment>(root, "segments", true, read_segment);
    // Ground is implicit; an explicit entry is accepted and moved to the front.
    BodySegment ground;
    ground.name = std::string(kGroundName);
    model.segments.push_back(ground);
    for (auto& s : segments) {
        if (s.name == kGroundName) {
            if (s.mass != 0.0) throw ParseError("ground must be massless", 0, "segments.ground.mass");
            continue;
        }
        model.segments.push_back(std::move(s));
    }
    model.joints = read_section<JointDef>(root, "joints", true, read_joint);
    model.muscles = read_section<MuscleElement>(root, "muscles", false, read_muscle);
    model.groups = read_section<MuscleGroup>(root, "groups", false, read_group);
    model.sites = read_section<Site>(root, "sites", false, read_site);

    auto violations = validate_model(model);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    model.rebuild();
    return model;
}

Model load_model_file(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file '" + path.string() + "'", 0, "");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_model(buf.str(), options);
}

std::string dump_model(const Model& model) {
    json doc = json::object();
    doc["gravity"] = detail::vec3_json(model.gravity);
    json segments = json::array();
    for (std::size_t i = 1; i < model.segments.size(); ++i) {
        const auto& s = model.segments[i];
        json inertia = json::array();
        for (int r = 0; r < 3; ++r) inertia.push_back(detail::vec3_json(s.inertia.row(r).transpose()));
        segments.push_back({{"name", s.name}, {"mass", s.mass}, {"com", detail::vec3_json(s.com)}, {"inertia", inertia}});
    }
    doc["segments"] = segments;

    json joints = json::array();
    for (const auto& j : model.joints) {
        json node = {{"name", j.name}, {"parent", j.parent}, {"child", j.child}, {"kind", std::string(to_string(j.kind))},
                     {"anchor_parent", detail::vec3_json(j.anchor_parent)},
                     {"anchor_child", detail::vec3_json(j.anchor_child)}};
        if (!j.axes.empty()) {
            json axes = json::array();
            for (const auto& a : j.axes) axes.push_back(detail::vec3_json(a));
            node["axes"] = axes;
            node["coordinates"] = j.coordinates;
        }
        if (!j.limits.empty()) {
            json lim = json::array();
            for (const auto& l : j.limits) lim.push_back(l ? json::array({l->min, l->max}) : json());
            node["limits"] = lim;
        }
        joints.push_back(node);
    }
    doc["joints"] = joints;

    json muscles = json::array();
    for (const auto& m : model.muscles) {
        json path = json::array();
        for (const auto& p : m.path) path.push_back({{"segment", p.segment}, {"point", detail::vec3_json(p.point)}});
        muscles.push_back({{"name", m.name}, {"group", m.group}, {"side", std::string(to_string(m.side))},
                           {"f_max", m.f_max}, {"path", path}});
    }
    doc["muscles"] = muscles;

    json groups = json::array();
    for (const auto& g : model.groups) {
        groups.push_back({{"id", g.id}, {"anatomical_name", std::string(to_string(g.anatomical_name))},
                          {"paper_element_count", g.paper_element_count}});
    }
    doc["groups"] = groups;

    json sites = json::array();
    for (const auto& s : model.sites) {
        sites.push_back({{"name", s.name}, {"segment", s.segment}, {"point", detail::vec3_json(s.point)}});
    }
    doc["sites"] = sites;
    return doc.dump(2) + "\n";
}

}  // namespace trunkload
