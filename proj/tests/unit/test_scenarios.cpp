#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "trunkload/pipeline.hpp"
#include "trunkload/scenarios.hpp"

using namespace trunkload;
using trunkload::test::default_model;

namespace {

ScenarioConfig config(WalkingCase c, Phase p, double w, double f = 0.10, double kappa = 0.30) {
    ScenarioConfig cfg;
    cfg.walking_case = c;
    cfg.phase = p;
    cfg.body_weight = w;
    cfg.injured_foot_fraction = f;
    cfg.crutch_share = kappa;
    return cfg;
}

double vertical(const std::vector<SupportForce>& s, Contact c) {
    double total = 0.0;
    for (const auto& x : s) {
        if (x.contact == c) total += x.force.y();
    }
    return total;
}

double vertical_sum(const std::vector<SupportForce>& s) {
    double total = 0.0;
    for (const auto& x : s) total += x.force.y();
    return total;
}

std::size_t crutch_contacts(const std::vector<SupportForce>& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](const SupportForce& x) { return is_crutch(x.contact); }));
}

}  // namespace

TEST_CASE("load split examples") {
    SUBCASE("normal single support") {
        const auto s = distribute_loads(config(WalkingCase::normal, Phase::mid_stance, 700.0));
        REQUIRE(s.size() == 1);
        CHECK(s[0].force.y() == 700.0);
    }
    SUBCASE("single crutch shared support") {
        const auto s = distribute_loads(config(WalkingCase::single_crutch, Phase::shared_support, 700.0));
        CHECK(s.size() == 3);
        CHECK(vertical(s, Contact::right_foot) == doctest::Approx(70.0).epsilon(1e-15));
        CHECK(vertical(s, Contact::left_crutch) == doctest::Approx(189.0).epsilon(1e-15));
        CHECK(vertical(s, Contact::left_foot) == doctest::Approx(441.0).epsilon(1e-15));
        CHECK(vertical_sum(s) == doctest::Approx(700.0).epsilon(1e-15));
    }
    SUBCASE("double crutch, healthy foot lifted") {
        const auto s = distribute_loads(config(WalkingCase::double_crutch, Phase::healthy_step, 700.0));
        CHECK(s.size() == 3);
        CHECK(vertical(s, Contact::right_foot) == doctest::Approx(70.0).epsilon(1e-15));
        CHECK(vertical(s, Contact::left_crutch) == doctest::Approx(315.0).epsilon(1e-15));
        CHECK(vertical(s, Contact::right_crutch) == doctest::Approx(315.0).epsilon(1e-15));
        CHECK(vertical(s, Contact::left_foot) == 0.0);
    }
    SUBCASE("left injury swaps the contacts") {
        auto cfg = config(WalkingCase::single_crutch, Phase::shared_support, 700.0);
        cfg.injured_side = Side::left;
        const auto s = distribute_loads(cfg);
        CHECK(vertical(s, Contact::left_foot) == doctest::Approx(70.0));
        CHECK(vertical(s, Contact::right_crutch) == doctest::Approx(189.0));
    }
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(distribute_loads(config(WalkingCase::single_crutch, Phase::shared_support, 700.0, 1.5)), ConfigError);
    CHECK_THROWS_AS(distribute_loads(config(WalkingCase::single_crutch, Phase::shared_support, 700.0, 0.1, -0.1)),
                    ConfigError);
    CHECK_THROWS_AS(distribute_loads(config(WalkingCase::normal, Phase::shared_support, 700.0)), UnknownPhase);
    CHECK_THROWS_AS(parse_phase(WalkingCase::normal, "shared_support"), UnknownPhase);
    CHECK(parse_phase(WalkingCase::double_crutch, "advance") == Phase::healthy_step);
    CHECK(parse_phase(WalkingCase::single_crutch, "shared_support") == Phase::shared_support);
}

TEST_CASE("property: vertical support sums to W for random triples") {
    test::Rng rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        const double w = rng.uniform(300.0, 1500.0);
        const double f = rng.uniform(0.0, 1.0);
        const double kappa = rng.uniform(0.0, 1.0);
        for (const auto c : {WalkingCase::normal, WalkingCase::single_crutch, WalkingCase::double_crutch}) {
            for (const auto p : phases_of(c)) {
                const auto cfg = config(c, p, w, f, kappa);
                const auto s = distribute_loads(cfg);
                REQUIRE(std::abs(vertical_sum(s) - w) <= 4.0 * std::numeric_limits<double>::epsilon() * w);
                const bool injured_in_contact =
                    std::any_of(s.begin(), s.end(), [](const SupportForce& x) { return x.contact == Contact::right_foot; });
                if (injured_in_contact && c != WalkingCase::normal) {
                    REQUIRE(vertical(s, Contact::right_foot) == f * w);
                }
            }
        }
    }
}

TEST_CASE("property: heavier injured foot unloads the others") {
    for (const auto c : {WalkingCase::single_crutch, WalkingCase::double_crutch}) {
        const Phase p = default_phase(c);
        for (double f = 0.0; f < 0.95; f += 0.05) {
            const auto lo = distribute_loads(config(c, p, 700.0, f));
            const auto hi = distribute_loads(config(c, p, 700.0, f + 0.05));
            for (const auto& x : lo) {
                if (x.contact == Contact::right_foot) continue;
                CHECK(vertical(hi, x.contact) < x.force.y());
            }
        }
    }
}

TEST_CASE("case structure of crutch contacts") {
    for (const auto c : {WalkingCase::normal, WalkingCase::single_crutch, WalkingCase::double_crutch}) {
        for (const auto p : phases_of(c)) {
            const auto s = distribute_loads(config(c, p, 700.0));
            if (c == WalkingCase::normal) CHECK(crutch_contacts(s) == 0);
            if (c == WalkingCase::single_crutch) CHECK(crutch_contacts(s) <= 1);
            if (c == WalkingCase::double_crutch) CHECK(crutch_contacts(s) <= 2);
        }
    }
    CHECK(crutch_contacts(distribute_loads(config(WalkingCase::single_crutch, Phase::shared_support, 700.0))) == 1);
    CHECK(crutch_contacts(distribute_loads(config(WalkingCase::double_crutch, Phase::healthy_step, 700.0))) == 2);
    CHECK(crutch_count(WalkingCase::normal) == 0);
    CHECK(crutch_count(WalkingCase::single_crutch) == 1);
    CHECK(crutch_count(WalkingCase::double_crutch) == 2);
}

TEST_CASE("snapshots on the shipped model") {
    const Model& base = default_model();
    SUBCASE("normal mid stance is mirror symmetric with one foot load") {
        ScenarioConfig cfg;
        const auto snap = build_snapshot(cfg, base);
        CHECK(snap.supports.size() == 1);
        CHECK(snap.loads.size() == 1);
        const auto map = mirror_map(base);
        for (std::size_t j = 0; j < base.coordinate_count(); ++j) {
            CHECK(snap.posture.q[static_cast<Eigen::Index>(map.partner[j])] ==
                  map.sign[j] * snap.posture.q[static_cast<Eigen::Index>(j)]);
        }
        CHECK(snap.body_weight == doctest::Approx(base.total_mass() * 9.81));
    }
    SUBCASE("single crutch shared support has three loads") {
        ScenarioConfig cfg;
        cfg.walking_case = WalkingCase::single_crutch;
        cfg.phase = Phase::shared_support;
        const Model m = model_for_case(base, cfg.walking_case, cfg.injured_side);
        const auto snap = build_snapshot(cfg, m);
        CHECK(snap.loads.size() == 3);
        CHECK(std::abs(vertical_sum(snap.supports) - snap.body_weight) <= 1e-9);
    }
    SUBCASE("double crutch advance alias has injured foot plus two crutches") {
        ScenarioConfig cfg;
        cfg.walking_case = WalkingCase::double_crutch;
        cfg.phase = parse_phase(cfg.walking_case, "advance");
        const Model m = model_for_case(base, cfg.walking_case, cfg.injured_side);
        const auto snap = build_snapshot(cfg, m);
        CHECK(snap.loads.size() == 3);
        CHECK(crutch_contacts(snap.supports) == 2);
    }
    SUBCASE("crutch case on a crutchless model") {
        ScenarioConfig cfg;
        cfg.walking_case = WalkingCase::single_crutch;
        cfg.phase = Phase::shared_support;
        CHECK_THROWS_AS(build_snapshot(cfg, base), ModelMismatch);
    }
    SUBCASE("unknown coordinate in a posture table") {
        ScenarioConfig cfg;
        CHECK_THROWS_AS(build_snapshot(cfg, base, PostureTable{{"no_such_joint", 0.1}}), UnknownEntity);
    }
}

TEST_CASE("left injury mirrors the posture table") {
    const Model m = model_for_case(default_model(), WalkingCase::single_crutch, Side::right);
    const Model ml = model_for_case(default_model(), WalkingCase::single_crutch, Side::left);
    const auto table = default_posture(WalkingCase::single_crutch, Phase::shared_support);
    const auto right = posture_from_table(m, table, Side::right);
    const auto left = posture_from_table(ml, table, Side::left);
    CHECK(left.q[static_cast<Eigen::Index>(ml.coordinate_index("hip_flexion_l"))] ==
          right.q[static_cast<Eigen::Index>(m.coordinate_index("hip_flexion_r"))]);
    CHECK(left.q[static_cast<Eigen::Index>(ml.coordinate_index("lumbar_bending"))] ==
          -right.q[static_cast<Eigen::Index>(m.coordinate_index("lumbar_bending"))]);
    CHECK(left.q[static_cast<Eigen::Index>(ml.coordinate_index("crutch_abduction_r"))] ==
          table.at("crutch_abduction_l"));
}

TEST_CASE("shipped scenario files agree with the posture library") {
    for (const auto* name : {"normal", "single_crutch", "double_crutch"}) {
        CAPTURE(name);
        const auto doc = load_scenario_file(test::data_dir() / "scenarios" / (std::string(name) + ".json"));
        CHECK(doc.config.walking_case == *parse_walking_case(name));
        CHECK(doc.config.phase == default_phase(doc.config.walking_case));
        CHECK(doc.config.injured_foot_fraction == kDefaultInjuredFootFraction);
        CHECK(doc.config.crutch_share == kDefaultCrutchShare);
        REQUIRE(doc.posture.has_value());
        CHECK(*doc.posture == default_posture(doc.config.walking_case, doc.config.phase));
    }
}

TEST_CASE("scenario documents round-trip and reject junk") {
    const auto doc = load_scenario_file(test::data_dir() / "scenarios" / "single_crutch.json");
    const auto again = load_scenario(dump_scenario(doc));
    CHECK(again.config.walking_case == doc.config.walking_case);
    CHECK(again.config.phase == doc.config.phase);
    CHECK(*again.posture == *doc.posture);
    CHECK_THROWS_AS(load_scenario(R"({"case": "hopping"})"), ParseError);
    CHECK_THROWS_AS(load_scenario(R"({"case": "normal", "bogus": 1})"), ParseError);
    CHECK_NOTHROW(load_scenario(R"({"case": "normal", "bogus": 1})", true));
}

TEST_CASE("posture hash is stable and content sensitive") {
    const auto a = default_posture(WalkingCase::single_crutch, Phase::shared_support);
    auto b = a;
    CHECK(posture_hash(a) == posture_hash(b));
    b["lumbar_flexion"] += 1e-3;
    CHECK(posture_hash(a) != posture_hash(b));
    CHECK(hash_hex(0x1234).size() == 16);
}
