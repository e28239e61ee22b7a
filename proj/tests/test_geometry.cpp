#include <gtest/gtest.h>

#include <random>

#include "cpc/construct.hpp"

using namespace cpc;

namespace {

const double inv_sqrt2 = 1 / std::sqrt(2.0);

DecompPtr space(const std::string& f, int n, int q = 0) { return make_decomposition(build_space(f, n, q)); }

VSpec full_pair(const Decomposition& d, int i0, int i1) {
    VSpec v;
    v.entries = {{d.simple_index(i0), d.root_space(d.simple_index(i0))}, {d.simple_index(i1), d.root_space(d.simple_index(i1))}};
    return v;
}

VSpec line_pair(const Decomposition& d) {
    VSpec v;
    v.entries = {{d.simple_index(0), {d.root_space(d.simple_index(0))[0]}}, {d.simple_index(1), {d.root_space(d.simple_index(1))[0]}}};
    return v;
}

Vec<Rational> random_an(const Decomposition& d, std::mt19937_64& rng) {
    Vec<Rational> x(d.dim, Rational(0));
    std::uniform_int_distribution<int> u(-3, 3);
    for (int i = 0; i < d.dim; ++i)
        if (d.in_an(i)) x[i] = u(rng);
    return x;
}

double trace_power(const Matrix<double>& m, int k) {
    Matrix<double> p = m;
    for (int i = 1; i < k; ++i) p = p * m;
    double t = 0;
    for (std::size_t i = 0; i < m.rows; ++i) t += p(i, i);
    return t;
}

void expect_spectrum(const Vec<double>& got, Vec<double> want, double tol = 1e-10) {
    std::sort(want.begin(), want.end());
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "eigenvalue " << i;
}

int block_of_shape(const OrbitModel& o, const std::string& shape) {
    for (std::size_t b = 0; b < o.partition.size(); ++b)
        if (o.partition[b].shape == shape) return int(b);
    return -1;
}

}  // namespace

TEST(LeviCivita, MatchesKoszulFormula) {
    // 2⟨∇_X Y, Z⟩ = ⟨[X,Y],Z⟩ − ⟨[Y,Z],X⟩ + ⟨[Z,X],Y⟩ for a left-invariant metric
    for (auto dp : {space("sl_complex", 3), space("sp_real", 3), space("so_pq", 2, 5)}) {
        const auto& d = *dp;
        std::mt19937_64 rng(5);
        for (int t = 0; t < 20; ++t) {
            auto x = random_an(d, rng), y = random_an(d, rng), z = random_an(d, rng);
            auto n = levi_civita(d, x, y);
            for (int i = 0; i < d.dim; ++i)
                if (!d.in_an(i)) {
                    EXPECT_EQ(n[i], 0);
                }
            Rational lhs = 2 * d.metric_an(n, z);
            Rational rhs = d.metric_an(d.bracket(x, y), z) - d.metric_an(d.bracket(y, z), x) + d.metric_an(d.bracket(z, x), y);
            EXPECT_EQ(lhs, rhs);
        }
    }
}

TEST(LeviCivita, TorsionFree) {
    auto dp = space("sl_quaternion", 3);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        auto x = random_an(*dp, rng), y = random_an(*dp, rng);
        EXPECT_EQ(sub(levi_civita(*dp, x, y), levi_civita(*dp, y, x)), dp->bracket(x, y));
    }
}

TEST(ShapeOperator, SelfAdjointAndLinearInXi) {
    for (auto dp : {space("sl_complex", 3), space("sl_real", 4), space("sp_real", 3)}) {
        auto o = build_orbit(dp, full_pair(*dp, 0, 1));
        ShapeField f(o);
        EXPECT_LT(f.symmetry_residual, 1e-12);
        std::mt19937_64 rng(1);
        std::normal_distribution<double> g;
        for (int t = 0; t < 5; ++t) {
            Vec<double> c(o.dim_v());
            for (auto& x : c) x = g(rng);
            auto direct = shape_operator_vec(o, o.normal_vector(c));
            EXPECT_LT(max_abs(direct.m - f.at(c)), 1e-12);
        }
    }
}

TEST(ShapeOperator, RejectsNonUnitDirection) {
    auto dp = space("sl_real", 3);
    auto o = build_orbit(dp, line_pair(*dp));
    EXPECT_THROW(shape_operator(o, {1.0, 1.0}), InvalidArgument);
    EXPECT_THROW(o.normal_vector({1.0}), InvalidArgument);
}

TEST(Orbit, DimensionsAddUp) {
    for (auto dp : {space("sl_real", 3), space("sl_complex", 3), space("sl_quaternion", 3), space("sl_real", 4)}) {
        auto o = build_orbit(dp, line_pair(*dp));
        int an = 0;
        for (int i = 0; i < dp->dim; ++i) an += dp->in_an(i);
        EXPECT_EQ(o.dim_s() + o.dim_v(), an);
        for (int i = 0; i < o.dim_s(); ++i)
            for (int k = 0; k < o.dim_v(); ++k) EXPECT_NEAR(dp->metric_an(o.tangent[i], o.normal[k]), 0, 1e-12);
    }
}

TEST(Sweep, A2RealLinesSpectrum) {
    // sl3(C), V0, V1 real lines: {±|α0|/2, 0 × (dim g_{α0+α1} + 2)}
    auto dp = space("sl_complex", 3);
    auto o = build_orbit(dp, line_pair(*dp));
    auto v = cpc_sweep(o);
    EXPECT_TRUE(v.is_cpc);
    expect_spectrum(v.reference_spectrum, {-inv_sqrt2, 0, 0, 0, 0, inv_sqrt2});
    auto r = principal_curvatures(o, {inv_sqrt2, -inv_sqrt2});
    EXPECT_TRUE(austere_minimal_check(r).austere);
    EXPECT_TRUE(austere_minimal_check(r).minimal);
}

TEST(Sweep, DeterministicForFixedSeed) {
    auto dp = space("sl_real", 4);
    VSpec v;
    for (int r : {dp->simple_index(0), dp->simple_index(2)}) v.entries.push_back({r, dp->root_space(r)});
    auto o = build_orbit(dp, v);
    SamplerConfig cfg;
    cfg.seed = 99;
    auto a = cpc_sweep(o, cfg), b = cpc_sweep(o, cfg);
    EXPECT_EQ(a.is_cpc, b.is_cpc);
    EXPECT_EQ(a.max_spectrum_deviation, b.max_spectrum_deviation);
    EXPECT_EQ(a.witness_directions, b.witness_directions);
    EXPECT_FALSE(a.is_cpc);
}

TEST(Sweep, DirectionsAreUnit) {
    SamplerConfig cfg;
    for (int k : {1, 2, 3, 5})
        for (const auto& c : sweep_directions(k, cfg)) EXPECT_NEAR(dot(c, c), 1, 1e-12);
}

TEST(StringBlocks, Len3BlockSpectrumIsConstant) {
    auto dp = space("sl_real", 4);
    auto o = build_orbit(dp, full_pair(*dp, 0, 1));
    int b = block_of_shape(o, "len3");
    ASSERT_GE(b, 0);
    ShapeField f(o);
    for (const auto& c : sweep_directions(o.dim_v(), SamplerConfig{})) {
        auto sb = string_block(o, f.at(c), b);
        EXPECT_LT(sb.leakage, 1e-12);
        expect_spectrum(symmetric_eigenvalues(symmetrize(sb.block)), {-inv_sqrt2, 0, inv_sqrt2});
    }
}

TEST(StringBlocks, Len6BlockSpectrumIsConstant) {
    auto dp = space("sp_real", 3);
    auto o = build_orbit(dp, full_pair(*dp, 0, 1));
    int b = block_of_shape(o, "len6");
    ASSERT_GE(b, 0);
    ShapeField f(o);
    double r2 = std::sqrt(2.0);
    for (const auto& c : sweep_directions(o.dim_v(), SamplerConfig{})) {
        auto sb = string_block(o, f.at(c), b);
        expect_spectrum(symmetric_eigenvalues(symmetrize(sb.block)), {-r2, -inv_sqrt2, 0, 0, inv_sqrt2, r2});
    }
}

TEST(StringBlocks, OrthogonalRootsHaveNoStringClass) {
    auto dp = space("sl_real", 4);
    VSpec v;
    for (int r : {dp->simple_index(0), dp->simple_index(2)}) v.entries.push_back({r, dp->root_space(r)});
    auto o = build_orbit(dp, v);
    std::multiset<std::string> shapes;
    for (const auto& pb : o.partition) shapes.insert(pb.shape);
    EXPECT_EQ(shapes, (std::multiset<std::string>{"plane", "other"}));
    EXPECT_EQ(o.partition[block_of_shape(o, "other")].columns.size(), 4u);
}

TEST(ObstructionBlocks, TraceInvariants) {
    const double pi = std::acos(-1.0);
    for (double phi : {0.0, 0.3, pi / 4, 1.2, pi / 2})
        for (double len : {std::sqrt(2.0), 2.0}) {
            double f = len / 2;
            auto b2 = obstruction_block(BlockKind::case_ii_3x3, phi, len);
            EXPECT_NEAR(trace_power(b2.matrix, 2), 2 * f * f, 1e-12);
            expect_spectrum(b2.spectrum, {-f, 0, f});
            auto t3 = obstruction_block(BlockKind::tail_3x3, phi, len);
            expect_spectrum(t3.spectrum, {-f, 0, f});
            auto b6 = obstruction_block(BlockKind::case_iii_6x6, phi, len);
            // spectrum {±2f, ±f, 0, 0}: tr M² = 10 f², tr M⁴ = 34 f⁴
            EXPECT_NEAR(trace_power(b6.matrix, 2), 10 * f * f, 1e-12);
            EXPECT_NEAR(trace_power(b6.matrix, 4), 34 * std::pow(f, 4), 1e-12);
            expect_spectrum(b6.spectrum, {-2 * f, -f, 0, 0, f, 2 * f});
        }
}

TEST(ObstructionBlocks, OrthogonalBlockDependsOnPhi) {
    const double pi = std::acos(-1.0);
    auto a = obstruction_block(BlockKind::orthogonal4, 0.0), b = obstruction_block(BlockKind::orthogonal4, pi / 4);
    EXPECT_GT(spectrum_distance(a.spectrum, b.spectrum), 0.1);
    EXPECT_NE(std::round(trace_power(a.matrix, 4) * 1e6), std::round(trace_power(b.matrix, 4) * 1e6));
}

TEST(ObstructionBlocks, G2Spectrum) {
    auto b = obstruction_block(BlockKind::G2, 0.0);
    EXPECT_LT(b.max_imag, 1e-12);
    expect_spectrum(b.spectrum, {-std::sqrt(3.5), 0, std::sqrt(3.5)});
    EXPECT_FALSE(b.symmetric);
    EXPECT_THROW(obstruction_block(BlockKind::case_ii_3x3, 2.0), InvalidArgument);
    EXPECT_THROW(obstruction_block("nonsense", 0.0), InvalidArgument);
}

TEST(PhiMaps, IsometryOnNontrivialStrings) {
    for (auto dp : {space("sl_real", 3), space("sl_complex", 3), space("sl_quaternion", 3), space("sp_real", 3)}) {
        const auto& d = *dp;
        int a0 = d.simple_index(0), a1 = d.simple_index(1);
        auto xis = orthonormalize_an(d, d.root_space(a1));
        for (const auto& xi : xis) {
            auto p = phi_map(d, xi, a0);
            auto gram = p.matrix.transpose() * p.matrix;
            for (std::size_t i = 0; i < gram.rows; ++i)
                for (std::size_t j = 0; j < gram.cols; ++j) EXPECT_NEAR(gram(i, j), i == j ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(PhiMaps, RejectsBadInput) {
    auto dp = space("sl_real", 3);
    const auto& d = *dp;
    auto xi = orthonormalize_an(d, d.root_space(d.simple_index(1)))[0];
    int top = d.root_index({1, 1});
    EXPECT_THROW(phi_map(d, xi, top), InvalidArgument);
    EXPECT_THROW(phi_map(d, scale(2.0, xi), d.simple_index(0)), InvalidArgument);
}
