#include <fstream>
#include <sstream>

#include "json_reader.hpp"
#include "trunkload/scenarios.hpp"

namespace trunkload {

using detail::json;
using detail::ObjectReader;

ScenarioDocument load_scenario(std::string_view document, bool lenient) {
    const json doc = detail::parse_document(document);
    ObjectReader r(doc, "", lenient);
    r.allow_only({"case", "phase", "injured_side", "injured_foot_fraction", "crutch_share", "body_weight", "posture"});

    ScenarioDocument out;
    auto& cfg = out.config;
    const auto walking_case = parse_walking_case(r.string("case"));
    if (!walking_case) r.fail("expected one of normal, single_crutch, double_crutch", "case");
    cfg.walking_case = *walking_case;
    cfg.phase = r.has("phase") ? parse_phase(cfg.walking_case, r.string("phase")) : default_phase(cfg.walking_case);
    if (r.has("injured_side")) {
        const auto side = parse_side(r.string("injured_side"));
        if (!side || *side == Side::midline) r.fail("expected left or right", "injured_side");
        cfg.injured_side = *side;
    }
    cfg.injured_foot_fraction = r.number_or("injured_foot_fraction", kDefaultInjuredFootFraction);
    cfg.crutch_share = r.number_or("crutch_share", kDefaultCrutchShare);
    if (r.has("body_weight")) cfg.body_weight = r.number("body_weight");

    if (r.has("posture")) {
        const auto& table = r.at("posture");
        if (!table.is_object()) r.fail("expected an object of coordinate -> value", "posture");
        PostureTable posture;
        for (const auto& [name, value] : table.items()) {
            posture[name] = ObjectReader::as_number(value, r.field("posture") + "." + name);
        }
        out.posture = std::move(posture);
    }
    cfg.validate();
    return out;
}

ScenarioDocument load_scenario_file(const std::filesystem::path& path, bool lenient) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path.string() + "'", 0, "");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str(), lenient);
}

std::string dump_scenario(const ScenarioDocument& scenario) {
    const auto& cfg = scenario.config;
    json doc = {
        {"case", std::string(to_string(cfg.walking_case))},
        {"phase", std::string(to_string(cfg.phase))},
        {"injured_side", std::string(to_string(cfg.injured_side))},
        {"injured_foot_fraction", cfg.injured_foot_fraction},
        {"crutch_share", cfg.crutch_share},
    };
    if (cfg.body_weight) doc["body_weight"] = *cfg.body_weight;
    if (scenario.posture) {
        json table = json::object();
        for (const auto& [name, value] : *scenario.posture) table[name] = value;
        doc["posture"] = table;
    }
    return doc.dump(2) + "\n";
}

}  // namespace trunkload
