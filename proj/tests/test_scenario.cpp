#include <gtest/gtest.h>

#include "cpc/scenario.hpp"

using namespace cpc;

namespace {

json without_timing(json j) {
    j.erase("timing");
    return j;
}

json run_json(const json& j) { return run_scenario(scenario_from_json(j)).report; }

const json& check(const json& report, const std::string& name) {
    for (const auto& c : report["checks"])
        if (c["name"] == name) return c;
    throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(Space, Parsing) {
    auto s = parse_space("so_pq(2,5)");
    EXPECT_EQ(s.family, "so_pq");
    EXPECT_EQ(s.n, 2);
    EXPECT_EQ(s.q, 5);
    EXPECT_EQ(parse_space("sl_real:4").n, 4);
    EXPECT_EQ(parse_space(" sl_complex( 3 ) ").label(), "sl_complex(3)");
    EXPECT_EQ(space_from_json(json{{"family", "sp_real"}, {"n", 3}}).label(), "sp_real(3)");
    for (const char* bad : {"sl_real", "sl_real(3", "gl_real(3)", "so_pq(3)", "sl_real(3,2)", ""})
        EXPECT_THROW(parse_space(bad), SchemaError) << bad;
    EXPECT_THROW(space_from_json(json{{"family", "sl_real"}, {"n", 3}, {"p", 1}}), SchemaError);
}

TEST(Presets, AllMeetTheirExpectation) {
    for (const auto& p : presets()) {
        auto out = run_scenario(scenario_from_json({{"preset", p.name}}));
        EXPECT_TRUE(out.pass) << p.name << "\n" << out.report.dump(1);
        EXPECT_EQ(out.report["schema_version"], schema_version);
        EXPECT_EQ(out.report["scenario"]["space"], p.space.label());
    }
}

TEST(Presets, SweepVerdicts) {
    std::map<std::string, bool> cpc{{"a2-complex-lines", true}, {"canonical-ext-ii", true}, {"canonical-ext-iii", true},
                                    {"orthogonal-roots", false}, {"flat-extension", false}, {"length-obstruction", false},
                                    {"main-theorem-I", true}, {"main-theorem-II-ii-b", true}};
    for (const auto& [name, want] : cpc) {
        auto r = run_json({{"preset", name}});
        EXPECT_EQ(check(r, "sweep")["payload"]["is_cpc"], want) << name;
    }
}

TEST(Presets, InvertedExpectationFails) {
    auto out = run_scenario(scenario_from_json({{"preset", "a2-complex-lines"}, {"expect", "fail"}}));
    EXPECT_FALSE(out.pass);
}

TEST(Presets, SpaceOverrideWithinFamily) {
    auto s = scenario_from_json({{"preset", "canonical-ext-ii"}, {"space", "sl_real(5)"}});
    auto out = run_scenario(s);
    EXPECT_TRUE(out.pass);
    EXPECT_EQ(out.report["scenario"]["space"], "sl_real(5)");
}

TEST(Scenario, DeterministicApartFromTiming) {
    json j = {{"preset", "orthogonal-roots"}, {"seed", 7}};
    EXPECT_EQ(without_timing(run_json(j)), without_timing(run_json(j)));
    json s = {{"preset", "codim-exclusion"}, {"scan", {{"trials", 20}}}};
    EXPECT_EQ(without_timing(run_json(s)), without_timing(run_json(s)));
}

TEST(Scenario, ExpandedVRoundTrips) {
    auto first = run_json({{"preset", "main-theorem-II-ii-b"}, {"checks", {"sweep"}}});
    json v = json::array();
    for (const auto& e : first["scenario"]["v"]) v.push_back({{"root", e["root"]}, {"basis", e["basis"]}});
    auto second = run_json({{"space", "sl_quaternion(3)"}, {"v", v}, {"checks", {"sweep"}}});
    EXPECT_EQ(check(first, "sweep")["payload"], check(second, "sweep")["payload"]);
    EXPECT_EQ(first["scenario"]["v"], second["scenario"]["v"]);
}

TEST(Scenario, ExplicitEntries) {
    json j = {{"space", "sl_real(4)"},
              {"v", {{{"root", {1, 0, 0}}, {"full", true}}, {{"root", {0, 1, 0}}, {"indices", {0}}}}},
              {"checks", {"decompose", "sweep", "characterize", "blocks", "invariants", "normalizer"}}};
    auto out = run_scenario(scenario_from_json(j));
    EXPECT_TRUE(out.pass) << out.report.dump(1);
    EXPECT_EQ(check(out.report, "characterize")["payload"]["dim_bracket"], 1);
    EXPECT_EQ(check(out.report, "decompose")["payload"]["dim"], 15);
}

TEST(Scenario, RationalBasisCoordinates) {
    auto d = build_decomposition({"sl_complex", 3});
    auto g = d->root_space(d->simple_index(0));
    json row = json::array();
    for (int i = 0; i < d->dim; ++i) {
        Rational x = g[0][i] / 2 - g[1][i] * Rational(1, 3);
        row.push_back(x.get_str());
    }
    json j = {{"space", "sl_complex(3)"}, {"v", {{{"root", {1, 0}}, {"basis", {row}}}}}, {"checks", {"sweep"}}};
    EXPECT_TRUE(run_scenario(scenario_from_json(j)).pass);
}

TEST(Scenario, SchemaErrors) {
    std::vector<json> bad{
        json::array(),
        {{"preset", "a2-full"}, {"colour", 1}},
        {{"preset", "no-such"}},
        {{"space", "sl_real(3)"}},
        {{"preset", "a2-full"}, {"v", json::array()}},
        {{"preset", "a2-full"}, {"expect", "maybe"}},
        {{"preset", "a2-full"}, {"schema_version", 2}},
        {{"preset", "a2-full"}, {"tolerances", {{"cpc", -1}}}},
        {{"preset", "a2-full"}, {"tolerances", {{"speed", 1}}}},
        {{"preset", "a2-full"}, {"checks", {"magic"}}},
        {{"preset", "a2-full"}, {"seed", -3}},
        {{"preset", "a2-full"}, {"pair", {0}}},
        {{"preset", "a2-full"}, {"scan", {{"trials", 0}}}},
    };
    for (const auto& j : bad) EXPECT_THROW(scenario_from_json(j), SchemaError) << j.dump();
}

TEST(Scenario, InvalidVEntries) {
    auto run = [](json v) { return run_scenario(scenario_from_json({{"space", "sl_real(3)"}, {"v", v}, {"checks", {"sweep"}}})); };
    EXPECT_THROW(run(json::array()), SchemaError);
    EXPECT_THROW(run({{{"root", {1, 0}}, {"dim", 1}, {"full", true}}}), SchemaError);
    EXPECT_THROW(run({{{"root", {1, 0}}, {"dim", 1}}, {{"root", {1, 0}}, {"dim", 1}}}), SchemaError);
    EXPECT_THROW(run({{{"root", {1, 0, 0}}, {"dim", 1}}}), SchemaError);
    EXPECT_THROW(run({{{"root", {2, 1}}, {"dim", 1}}}), InvalidArgument);
    EXPECT_THROW(run({{{"root", {1, 0}}, {"dim", 2}}}), InvalidArgument);
    EXPECT_THROW(run({{{"root", {1, 0}}, {"basis", {{"1/0", 0, 0, 0, 0, 0, 0, 0}}}}}), SchemaError);
    EXPECT_THROW(run({{{"root", {1, 0}}, {"basis", {{1, 1, 1, 1, 1, 1, 1, 1}}}}}), InvalidArgument);
}

TEST(Scenario, CharacterizeNeedsSimplePair) {
    json j = {{"space", "sl_real(3)"}, {"v", {{{"root", {1, 1}}, {"full", true}}}}, {"checks", {"characterize"}}};
    EXPECT_THROW(run_json(j), InvalidArgument);
}

TEST(Scenario, EmptyChecksGiveDecompositionSummary) {
    auto r = run_json({{"preset", "a2-full"}, {"checks", json::array()}});
    ASSERT_EQ(r["checks"].size(), 1u);
    EXPECT_EQ(r["checks"][0]["name"], "decompose");
    EXPECT_TRUE(r["pass"]);
}

TEST(Scenario, KernelDimension) {
    // V0 = g_a0, V1 = g_a1: the shape operator vanishes, kernel = whole tangent space;
    // real lines: kernel dim g_a0+a1 + 2
    auto full = check(run_json({{"preset", "a2-full"}, {"checks", {"sweep"}}}), "sweep")["payload"];
    ASSERT_EQ(full["reference_spectrum"].size(), 1u);
    EXPECT_EQ(full["reference_spectrum"][0]["value"], 0.0);
    EXPECT_EQ(full["reference_spectrum"][0]["multiplicity"], full["dim_s"]);
    auto lines = check(run_json({{"preset", "a2-complex-lines"}, {"checks", {"sweep"}}}), "sweep")["payload"];
    int zero = 0;
    for (const auto& c : lines["reference_spectrum"])
        if (c["value"] == 0.0) zero = c["multiplicity"];
    EXPECT_EQ(zero, 2 + 2);
}

TEST(Scenario, ExpectTransitive) {
    json j = {{"preset", "a2-full"}, {"checks", {"normalizer"}}, {"expect_transitive", false}};
    EXPECT_FALSE(run_scenario(scenario_from_json(j)).pass);
    j["expect_transitive"] = true;
    EXPECT_TRUE(run_scenario(scenario_from_json(j)).pass);
}

TEST(Dump, CartanIntegersAndGram) {
    for (const auto& s : standard_spaces()) {
        auto d = build_decomposition(s);
        auto j = dump_json(*d, s);
        ASSERT_EQ(j["positive_roots"].size(), std::size_t(d->num_positive()));
        for (int r = 0; r < d->num_positive(); ++r) {
            for (int i = 0; i < d->sys.rank; ++i)
                EXPECT_EQ(j["cartan_integers"][r][i], d->sys.cartan_integer(d->sys.simple(i), d->root(r)));
            EXPECT_EQ(j["h_lambda_gram"][r][r], j["positive_roots"][r]["length_sq"]);
        }
        EXPECT_EQ(j["dim_a"], d->sys.rank);
    }
}

TEST(Suite, AcceptanceFailsOnlyOnCommutationConstant) {
    auto out = run_suite("paper-acceptance");
    EXPECT_FALSE(out.pass);
    ASSERT_EQ(out.report["criteria"].size(), 10u);
    for (const auto& c : out.report["criteria"]) EXPECT_EQ(c["pass"], c["id"] != 5) << c["title"];
    EXPECT_NE(suite_table(out.report).find("suite paper-acceptance: FAIL"), std::string::npos);
    EXPECT_THROW(run_suite("nightly"), SchemaError);
}

TEST(Format, TableAlignment) {
    auto t = format_table({{"a", "bb"}, {"ccc", "d"}});
    EXPECT_EQ(t, "a    bb\nccc  d\n");
}
