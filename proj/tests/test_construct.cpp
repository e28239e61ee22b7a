#include <gtest/gtest.h>

#include <random>

#include "cpc/construct.hpp"

using namespace cpc;

namespace {

DecompPtr space(const std::string& f, int n, int q = 0) { return make_decomposition(build_space(f, n, q)); }

std::vector<Vec<Rational>> first(const Decomposition& d, int simple, int k) {
    auto g = d.root_space(d.simple_index(simple));
    g.resize(k);
    return g;
}

}  // namespace

TEST(Characterization, SymmetricAndBounded) {
    // ad X is injective g_α1 → g_α0+α1 for X ≠ 0, so dim [V0,V1] ≥ max(dim V0, dim V1)
    for (auto dp : {space("sl_complex", 3), space("sl_quaternion", 3)}) {
        const auto& d = *dp;
        auto g0 = d.root_space(d.simple_index(0)), g1 = d.root_space(d.simple_index(1));
        auto top = d.root_space(d.root_index({1, 1}));
        std::mt19937_64 rng(17);
        for (int t = 0; t < 60; ++t) {
            std::uniform_int_distribution<int> k(1, int(g0.size()));
            auto v0 = random_subspace(rng, g0, k(rng)), v1 = random_subspace(rng, g1, k(rng));
            auto a = characterization_check(d, 0, 1, v0, v1), b = characterization_check(d, 1, 0, v1, v0);
            EXPECT_EQ(a.cpc, b.cpc);
            EXPECT_EQ(a.dim_bracket, b.dim_bracket);
            EXPECT_GE(a.dim_bracket, std::max(a.dim_v0, a.dim_v1));
            EXPECT_LE(a.dim_bracket, top.size());
            if (a.dim_v0 == 1 && a.dim_v1 == 1) {
                EXPECT_TRUE(a.cpc);
            }
        }
    }
}

TEST(Characterization, RejectsVectorsOutsideRootSpace) {
    auto dp = space("sl_real", 3);
    auto g0 = dp->root_space(dp->simple_index(0));
    EXPECT_THROW(characterization_check(*dp, 0, 1, g0, g0), InvalidArgument);
    EXPECT_THROW(characterization_check(*dp, 0, 0, g0, g0), InvalidArgument);
}

TEST(Characterization, AgreesWithSweep) {
    SamplerConfig cfg;
    cfg.random_samples = 32;
    for (auto dp : {space("sl_real", 3), space("sl_complex", 3), space("sl_quaternion", 3)}) {
        auto r = equivalence_scan(dp, 0, 1, 25, 123, cfg);
        EXPECT_EQ(r.trials, 25);
        EXPECT_EQ(r.mismatches, 0) << dp->g().name;
    }
}

TEST(Characterization, CodimensionThreeNeverCpc) {
    auto dp = space("sl_quaternion", 3);
    auto r = codimension_scan(dp, 0, 1, 3, 3, 40, 5, SamplerConfig{});
    EXPECT_EQ(r.algebraic_cpc, 0);
    EXPECT_EQ(r.sweep_cpc, 0);
    EXPECT_EQ(r.mismatches, 0);
    EXPECT_EQ(r.bracket_dims.begin()->first, 4u);
}

TEST(CaseI, LinesAndFullSpacesAreCpc) {
    auto dp = space("sl_complex", 3);
    for (int dim : {1, 2}) {
        auto o = build_case_I(dp, 0, dim);
        EXPECT_EQ(o.v.case_tag, "I");
        EXPECT_TRUE(cpc_sweep(o).is_cpc) << "dim " << dim;
    }
    EXPECT_THROW(build_case_I(dp, 0, 3), InvalidArgument);
    EXPECT_THROW(build_case_I(dp, 2, 1), InvalidArgument);
}

TEST(CaseII, Tags) {
    auto dp = space("sl_quaternion", 3);
    EXPECT_EQ(case_II_spec(*dp, 0, 1, first(*dp, 0, 1), first(*dp, 1, 1)).case_tag.substr(0, 2), "II");
    auto full = case_II_spec(*dp, 0, 1, dp->root_space(dp->simple_index(0)), dp->root_space(dp->simple_index(1)));
    EXPECT_EQ(full.case_tag, "II-i");
}

TEST(ComplexStructure, ExampleInSl3H) {
    auto dp = space("sl_quaternion", 3);
    auto c = complex_example(*dp, 0, 1);
    EXPECT_EQ(c.spec.case_tag, "II-ii-b");
    EXPECT_EQ(c.dim_bracket, 2u);
    EXPECT_TRUE(c.certificate.valid());
    EXPECT_EQ(c.certificate.kind, "complex");
    const auto& t = c.certificate.generators[0];
    for (int i = 0; i < dp->dim; ++i)
        if (t[i] != 0) {
            EXPECT_EQ(dp->component[i], Component::k0);
        }
    auto o = build_orbit(dp, c.spec);
    EXPECT_TRUE(cpc_sweep(o).is_cpc);
}

TEST(ComplexStructure, NeedsTwoDimensionalTop) {
    auto dp = space("sl_real", 3);
    EXPECT_THROW(complex_example(*dp, 0, 1), InvalidArgument);
}

TEST(QuaternionicStructure, RejectedInSl3H) {
    // a quaternionic structure on g_α0+α1 would need dim 8; in sl3(H) the multiplicity is 4
    auto dp = space("sl_quaternion", 3);
    const auto& d = *dp;
    auto g = d.root_space(d.root_index({1, 1}));
    bool rejected = false;
    try {
        auto q = quaternionic_structure(d, g[0], g[1], g[2]);
        build_V_quaternionic(d, 0, 1, first(d, 0, 1)[0], first(d, 1, 1)[0], q.generators.at(0), q.generators.at(1));
    } catch (const InvalidArgument&) {
        rejected = true;
    }
    EXPECT_TRUE(rejected);
}

TEST(CanonicalExtension, SpectraOnly) {
    auto sl4 = space("sl_real", 4), sp6 = space("sp_real", 3);
    for (auto dp : {sl4, sp6}) {
        VSpec v;
        for (int i : {0, 1}) v.entries.push_back({dp->simple_index(i), dp->root_space(dp->simple_index(i))});
        EXPECT_TRUE(cpc_sweep(canonical_extension_scenario(dp, 0, 1, v)).is_cpc) << dp->g().name;
    }
    VSpec bad;
    bad.entries.push_back({sl4->simple_index(2), sl4->root_space(sl4->simple_index(2))});
    EXPECT_THROW(canonical_extension_scenario(sl4, 0, 1, bad), InvalidArgument);
}

TEST(FlatExtension, NotAustere) {
    auto dp = space("sl_real", 4);
    VSpec v;
    for (Coeffs c : {Coeffs{1, 0, 0}, Coeffs{0, 1, 0}, Coeffs{1, 1, 0}}) {
        int r = dp->root_index(c);
        v.entries.push_back({r, dp->root_space(r)});
    }
    auto o = build_orbit(dp, v);
    auto verdict = cpc_sweep(o);
    EXPECT_FALSE(verdict.is_cpc);
    auto r = principal_curvatures(o, verdict.witness_directions.first);
    auto s = principal_curvatures(o, verdict.witness_directions.second);
    EXPECT_FALSE(austere_minimal_check(r).austere && austere_minimal_check(s).austere);
}

TEST(LengthObstruction, WitnessEigenvector) {
    auto dp = space("so_pq", 2, 5);
    auto r = length_obstruction_scenario(dp);
    EXPECT_FALSE(r.verdict.is_cpc);
    EXPECT_NEAR(r.alpha2_len, 2.0, 1e-14);
    EXPECT_LT(dp->length_sq(dp->simple_index(r.short_simple)), dp->length_sq(dp->simple_index(r.long_simple)));
    ASSERT_FALSE(r.witness.empty());
    for (const auto& w : r.witness) {
        EXPECT_NEAR(w.expected, std::sin(w.phi) * r.alpha2_len / 2, 1e-14);
        EXPECT_NEAR(w.rayleigh, w.expected, 1e-8);
        EXPECT_LT(w.residual, 1e-8);
    }
}

TEST(Commutation, AdFormHoldsPhiFormIsIsometric) {
    auto dp = space("sp_real", 3);
    VSpec v;
    for (int i : {0, 1}) v.entries.push_back({dp->simple_index(i), dp->root_space(dp->simple_index(i))});
    auto o = build_orbit(dp, v);
    int b = -1;
    for (std::size_t k = 0; k < o.partition.size(); ++k)
        if (o.partition[k].shape == "len6") b = int(k);
    ASSERT_GE(b, 0);
    auto c = commutation_identity(o, b);
    EXPECT_LT(c.ad_residual, 1e-12);
    EXPECT_NEAR(c.phi_ratio, 1, 1e-12);
    EXPECT_LT(c.phi_residual_1, 1e-12);
    EXPECT_NEAR(c.norm_l, c.norm_r, 1e-12);
    // the φ-form with constant 2 does not hold
    EXPECT_GT(c.phi_residual_2, 0.5);
}

TEST(Normalizer, Sl3C) {
    auto dp = space("sl_complex", 3);
    auto proper = normalizer_check(build_case_II(dp, 0, 1, first(*dp, 0, 1), first(*dp, 1, 1)));
    EXPECT_FALSE(proper.transitive_possible);
    EXPECT_EQ(proper.m_dim, 0u);
    ASSERT_TRUE(proper.witness_xi.has_value());
    auto full = normalizer_check(build_case_II(dp, 0, 1, dp->root_space(dp->simple_index(0)), dp->root_space(dp->simple_index(1))));
    EXPECT_TRUE(full.transitive_possible);
    EXPECT_EQ(full.m_dim, 4u);
    EXPECT_EQ(full.k_dim, proper.k_dim);
}
