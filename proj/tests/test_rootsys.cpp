#include <gtest/gtest.h>

#include "cpc/rootsys.hpp"

using namespace cpc;

namespace {

struct Case {
    Family f;
    int rank;
    std::size_t positive;
};

const std::vector<Case> cases{
    {Family::A, 1, 1},  {Family::A, 2, 3},  {Family::A, 3, 6},  {Family::A, 4, 10}, {Family::B, 2, 4},
    {Family::B, 3, 9},  {Family::C, 2, 4},  {Family::C, 3, 9},  {Family::D, 4, 12}, {Family::BC, 2, 6},
    {Family::BC, 3, 12}, {Family::G2, 2, 6},
};

std::vector<Coeffs> all_roots(const AbstractRootSystem& s) {
    std::vector<Coeffs> out;
    for (const auto& r : s.positive_roots) {
        out.push_back(r.coeffs);
        out.push_back(-1 * r.coeffs);
    }
    return out;
}

}  // namespace

TEST(RootSystem, PositiveRootCounts) {
    for (const auto& c : cases) {
        auto s = build_root_system(c.f, c.rank);
        EXPECT_EQ(s.positive_roots.size(), c.positive) << to_string(c.f) << c.rank;
    }
}

TEST(RootSystem, ShortestSimpleRootHasLengthTwo) {
    for (const auto& c : cases) {
        auto s = build_root_system(c.f, c.rank);
        Rational m = s.simple_roots[0].length_sq;
        for (const auto& r : s.positive_roots) m = std::min(m, Rational(r.length_sq));
        EXPECT_EQ(m, 2) << to_string(c.f) << c.rank;
    }
}

TEST(RootSystem, WeylReflectionsPermuteRoots) {
    for (const auto& c : cases) {
        auto s = build_root_system(c.f, c.rank);
        auto roots = all_roots(s);
        for (const auto& a : roots)
            for (const auto& l : roots) {
                auto r = s.weyl_reflect(a, l);
                EXPECT_TRUE(s.is_root(r.coeffs)) << to_string(c.f) << c.rank << " " << coeffs_label(a) << " " << coeffs_label(l);
                EXPECT_EQ(r.length_sq, s.make(l).length_sq);
            }
    }
}

TEST(RootSystem, CartanIntegerIsStringDefect) {
    // A_{α,λ} = p − q for the α-string λ − pα, …, λ + qα, and p + q ≤ 3 (λ not proportional to α)
    for (const auto& c : cases) {
        auto s = build_root_system(c.f, c.rank);
        for (const auto& a : all_roots(s))
            for (const auto& l : all_roots(s)) {
                Vec<Rational> va(a.begin(), a.end()), vl(l.begin(), l.end());
                if (rank({va, vl}) < 2) continue;
                auto str = s.alpha_string(a, l);
                int p = 0;
                while (!(str[p].coeffs == l)) ++p;
                int q = int(str.size()) - 1 - p;
                EXPECT_EQ(s.cartan_integer(a, l), p - q);
                EXPECT_LE(str.size(), 4u);
            }
    }
}

TEST(RootSystem, G2CartanMatrix) {
    auto s = build_root_system(Family::G2, 2);
    auto a = s.cartan_matrix;
    EXPECT_EQ(a(0, 0), 2);
    EXPECT_EQ(a(1, 1), 2);
    EXPECT_EQ(std::min(a(0, 1), a(1, 0)), -3);
    EXPECT_EQ(std::max(a(0, 1), a(1, 0)), -1);
    std::set<Rational> lengths;
    for (const auto& r : s.positive_roots) lengths.insert(r.length_sq);
    EXPECT_EQ(lengths, (std::set<Rational>{2, 6}));
}

TEST(RootSystem, ReducedSimpleRoots) {
    EXPECT_EQ(build_root_system(Family::BC, 3).reduced_simple, (std::vector<int>{0, 1}));
    EXPECT_EQ(build_root_system(Family::C, 3).reduced_simple, (std::vector<int>{0, 1, 2}));
}

TEST(RootSystem, MultiplicityProfile) {
    auto s = build_root_system(Family::B, 2, {3, 1});
    for (std::size_t r = 0; r < s.positive_roots.size(); ++r)
        EXPECT_EQ(s.multiplicities[r], s.positive_roots[r].length_sq == 2 ? 3 : 1);
    EXPECT_THROW(build_root_system(Family::B, 2, {1, 2, 3}), InvalidArgument);
}

TEST(RootSystem, RejectsInvalidInput) {
    EXPECT_THROW(build_root_system(Family::D, 2), InvalidArgument);
    EXPECT_THROW(build_root_system(Family::G2, 3), InvalidArgument);
    EXPECT_THROW(build_root_system(Family::A, 0), InvalidArgument);
    auto s = build_root_system(Family::A, 2);
    EXPECT_THROW(s.cartan_integer({1, -1}, {1, 0}), InvalidArgument);
    EXPECT_THROW(s.level({2, 1}), InvalidArgument);
    EXPECT_THROW(s.pair_string_class(0, 0, {1, 0}), InvalidArgument);
    EXPECT_THROW(s.pair_string_class(0, 1, {1, 1}), InvalidArgument);
}

TEST(RootSystem, A3StringClass) {
    auto s = build_root_system(Family::A, 3);
    auto c = s.pair_string_class(0, 1, {0, 0, 1});
    EXPECT_EQ(c.shape, ClassShape::len3);
    ASSERT_EQ(c.members.size(), 3u);
    EXPECT_EQ(c.members[1].coeffs, (Coeffs{0, 1, 1}));
    EXPECT_EQ(c.members[2].coeffs, (Coeffs{1, 1, 1}));
}

TEST(RootSystem, StringClassesPartitionOffPlaneRoots) {
    for (auto [f, rank] : std::vector<std::pair<Family, int>>{{Family::A, 4}, {Family::C, 3}, {Family::D, 4}, {Family::B, 3}}) {
        auto s = build_root_system(f, rank);
        int a0 = -1, a1 = -1;
        for (int i = 0; i < rank && a0 < 0; ++i)
            for (int j = i + 1; j < rank && a0 < 0; ++j)
                if (s.cartan_integer(s.simple(i), s.simple(j)) == -1 && s.cartan_integer(s.simple(j), s.simple(i)) == -1) {
                    a0 = i;
                    a1 = j;
                }
        ASSERT_GE(a0, 0);
        std::map<Coeffs, int> hits;
        std::size_t off_plane = 0;
        for (const auto& r : s.positive_roots) {
            bool in_plane = true;
            for (int i = 0; i < rank; ++i)
                if (i != a0 && i != a1 && r.coeffs[i] != 0) in_plane = false;
            if (in_plane) continue;
            ++off_plane;
            try {
                auto c = s.pair_string_class(a0, a1, r.coeffs);
                std::size_t expect = c.shape == ClassShape::singleton ? 1 : c.shape == ClassShape::len3 ? 3 : 6;
                EXPECT_EQ(c.members.size(), expect);
                for (const auto& m : c.members) ++hits[m.coeffs];
            } catch (const InvalidArgument&) {
                // not the lowest member of its class
            }
        }
        EXPECT_EQ(hits.size(), off_plane) << to_string(f) << rank;
        for (const auto& [c, n] : hits) EXPECT_EQ(n, 1) << coeffs_label(c);
    }
}

TEST(RootSystem, C3HasLen6Class) {
    auto s = build_root_system(Family::C, 3);
    auto c = s.pair_string_class(0, 1, {0, 0, 1});
    EXPECT_EQ(c.shape, ClassShape::len6);
}
