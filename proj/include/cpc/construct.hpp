#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "cpc/geometry.hpp"

namespace cpc {

using DecompPtr = std::shared_ptr<const Decomposition>;

inline DecompPtr make_decomposition(LieAlgebra g) {
    return std::make_shared<const Decomposition>(restricted_decomposition(std::move(g)));
}

// ---- helpers ---------------------------------------------------------------

/// Independent spanning set of [U, W].
inline std::vector<Vec<Rational>> bracket_span(const Decomposition& d, const std::vector<Vec<Rational>>& u,
                                               const std::vector<Vec<Rational>>& w) {
    std::vector<Vec<Rational>> out;
    for (const auto& x : u)
        for (const auto& y : w) out.push_back(d.bracket(x, y));
    return independent_subset(out);
}

/// Max |entry| of an exact vector, as a double.
inline double residual_of(const Vec<Rational>& v) {
    double r = 0;
    for (const auto& x : v) r = std::max(r, std::abs(x.get_d()));
    return r;
}

/// k random integer combinations of `basis` that are linearly independent.
inline std::vector<Vec<Rational>> random_subspace(std::mt19937_64& rng, const std::vector<Vec<Rational>>& basis,
                                                  std::size_t k, int bound = 5) {
    if (k > basis.size()) throw InvalidArgument("random_subspace: k exceeds the ambient dimension");
    for (;;) {
        std::vector<Vec<Rational>> out;
        for (std::size_t i = 0; i < k; ++i) out.push_back(random_combination(rng, basis, bound));
        if (rank(out) == k) return out;
    }
}

/// k distinct basis vectors chosen at random.
inline std::vector<Vec<Rational>> random_coordinate_subspace(std::mt19937_64& rng,
                                                             const std::vector<Vec<Rational>>& basis, std::size_t k) {
    if (k > basis.size()) throw InvalidArgument("random_coordinate_subspace: k exceeds the ambient dimension");
    std::vector<std::size_t> idx(basis.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<Vec<Rational>> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(basis[idx[i]]);
    return out;
}

/// Throws unless simple roots i0, i1 lie in Π′, have equal length and A = −1 both ways.
inline void require_pair(const Decomposition& d, int i0, int i1) {
    const auto& s = d.sys;
    if (i0 < 0 || i1 < 0 || i0 >= s.rank || i1 >= s.rank || i0 == i1)
        throw InvalidArgument("need two distinct simple root indices");
    for (int i : {i0, i1})
        if (std::find(s.reduced_simple.begin(), s.reduced_simple.end(), i) == s.reduced_simple.end())
            throw InvalidArgument("simple root " + coeffs_label(s.simple(i)) + " is not in Π′");
    if (s.cartan_integer(s.simple(i0), s.simple(i1)) != -1 || s.cartan_integer(s.simple(i1), s.simple(i0)) != -1)
        throw InvalidArgument("simple roots " + coeffs_label(s.simple(i0)) + ", " + coeffs_label(s.simple(i1)) +
                              " do not satisfy A_{α0,α1} = A_{α1,α0} = -1");
}

inline void require_in_root_space(const Decomposition& d, const std::vector<Vec<Rational>>& vs, int r,
                                  const std::string& what) {
    if (vs.empty()) throw InvalidArgument(what + " must be nonzero");
    for (const auto& v : vs)
        if (int(v.size()) != d.dim || is_zero(v) || !d.in_root_space(v, r))
            throw InvalidArgument(what + " is not contained in g_" + coeffs_label(d.root(r)));
}

/// Case tag of a V₀ ⊕ V₁ pair from its dimensions.
inline std::string case_II_tag(const Decomposition& d, int r0, int r1, std::size_t d0, std::size_t d1) {
    if (d0 == d.pos_idx[r0].size() && d1 == d.pos_idx[r1].size()) return "II-i";
    if (d0 != d1) return "custom";
    if (d0 == 1) return "II-ii-a";
    if (d0 == 2) return "II-ii-b";
    if (d0 == 4) return "II-ii-c";
    return "custom";
}

// ---- case builders ---------------------------------------------------------

inline OrbitModel build_case_I(DecompPtr dp, int simple, std::vector<Vec<Rational>> basis) {
    const auto& s = dp->sys;
    if (simple < 0 || simple >= s.rank) throw InvalidArgument("build_case_I: simple root index out of range");
    if (std::find(s.reduced_simple.begin(), s.reduced_simple.end(), simple) == s.reduced_simple.end())
        throw InvalidArgument("build_case_I: " + coeffs_label(s.simple(simple)) + " is not in Π′");
    int r = dp->simple_index(simple);
    require_in_root_space(*dp, basis, r, "V");
    VSpec v;
    v.entries = {{r, std::move(basis)}};
    v.case_tag = "I";
    return build_orbit(dp, std::move(v));
}

/// V = span of the first `dim` basis vectors of g_λ.
inline OrbitModel build_case_I(DecompPtr dp, int simple, int dim) {
    if (simple < 0 || simple >= dp->sys.rank) throw InvalidArgument("build_case_I: simple root index out of range");
    auto g = dp->root_space(dp->simple_index(simple));
    if (dim < 1 || dim > int(g.size()))
        throw InvalidArgument("build_case_I: dim V must lie in [1, " + std::to_string(g.size()) + "]");
    g.resize(dim);
    return build_case_I(std::move(dp), simple, std::move(g));
}

inline VSpec case_II_spec(const Decomposition& d, int i0, int i1, std::vector<Vec<Rational>> v0,
                          std::vector<Vec<Rational>> v1) {
    require_pair(d, i0, i1);
    int r0 = d.simple_index(i0), r1 = d.simple_index(i1);
    require_in_root_space(d, v0, r0, "V0");
    require_in_root_space(d, v1, r1, "V1");
    VSpec v;
    v.case_tag = case_II_tag(d, r0, r1, rank(v0), rank(v1));
    v.entries = {{r0, std::move(v0)}, {r1, std::move(v1)}};
    return v;
}

inline OrbitModel build_case_II(DecompPtr dp, int i0, int i1, std::vector<Vec<Rational>> v0,
                                std::vector<Vec<Rational>> v1) {
    auto v = case_II_spec(*dp, i0, i1, std::move(v0), std::move(v1));
    return build_orbit(std::move(dp), std::move(v));
}

/// Orbit of a ⊕ (n ⊖ V) in a larger space; V lives in the span of Φ = {α_{i0}, α_{i1}}.
inline OrbitModel canonical_extension_scenario(DecompPtr dp, int i0, int i1, VSpec v) {
    require_pair(*dp, i0, i1);
    for (const auto& e : v.entries) {
        const auto& c = dp->root(e.root);
        for (int k = 0; k < dp->sys.rank; ++k)
            if (k != i0 && k != i1 && c[k] != 0)
                throw InvalidArgument("canonical extension: root " + coeffs_label(c) + " is outside the Φ subsystem");
    }
    auto o = build_orbit(std::move(dp), std::move(v));
    std::vector<int> covered(o.d().num_positive(), 0);
    for (const auto& b : o.partition)
        for (int r : b.roots) ++covered[r];
    for (int c : covered)
        if (c != 1) throw ConsistencyError("string-partition", "string partition does not cover Δ⁺ exactly once");
    return o;
}

// ---- algebraic characterization -------------------------------------------

struct Characterization {
    bool cpc;
    std::size_t dim_v0, dim_v1, dim_bracket;
};

/// dim V₀ = dim V₁ = dim [V₀, V₁], exact.
inline Characterization characterization_check(const Decomposition& d, int i0, int i1,
                                               const std::vector<Vec<Rational>>& v0,
                                               const std::vector<Vec<Rational>>& v1) {
    require_pair(d, i0, i1);
    require_in_root_space(d, v0, d.simple_index(i0), "V0");
    require_in_root_space(d, v1, d.simple_index(i1), "V1");
    Characterization c;
    c.dim_v0 = rank(v0);
    c.dim_v1 = rank(v1);
    c.dim_bracket = bracket_span(d, v0, v1).size();
    c.cpc = c.dim_v0 == c.dim_v1 && c.dim_v1 == c.dim_bracket;
    return c;
}

// ---- complex and quaternionic structures -----------------------------------

struct StructureCertificate {
    std::string kind;                              ///< complex or quaternionic
    std::vector<Vec<Rational>> generators;         ///< J_i = ad(generator_i)
    std::vector<std::pair<std::string, double>> residuals;
    bool valid(double tol = 1e-10) const {
        for (const auto& [_, r] : residuals)
            if (r > tol) return false;
        return true;
    }
    double max_residual() const {
        double m = 0;
        for (const auto& [_, r] : residuals) m = std::max(m, r);
        return m;
    }
};

namespace detail {

struct PairRoots {
    int i0, i1, r0, r1, top;
};

/// The adjacent simple pair (α₀, α₁) with λ = α₀ + α₁.
inline PairRoots pair_of_sum(const Decomposition& d, int lambda) {
    const auto& c = d.root(lambda);
    std::vector<int> ones;
    for (int k = 0; k < d.sys.rank; ++k) {
        if (c[k] == 1) ones.push_back(k);
        else if (c[k] != 0) ones.push_back(-100);
    }
    if (ones.size() != 2 || ones[0] < 0 || ones[1] < 0)
        throw InvalidArgument("structure: " + coeffs_label(c) + " is not a sum of two simple roots");
    require_pair(d, ones[0], ones[1]);
    return {ones[0], ones[1], d.simple_index(ones[0]), d.simple_index(ones[1]), lambda};
}

inline int common_root(const Decomposition& d, const std::vector<Vec<Rational>>& vs) {
    std::optional<int> r;
    for (const auto& v : vs) {
        auto x = root_of_vector(d, v);
        if (!x || (r && *r != *x)) throw InvalidArgument("structure: vectors must lie in one positive root space");
        r = x;
    }
    return *r;
}

/// Requires pairwise orthogonal vectors of a common A N norm; returns the norm.
inline Rational common_norm(const Decomposition& d, const std::vector<Vec<Rational>>& vs) {
    Rational n = d.metric_an(vs[0], vs[0]);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (d.metric_an(vs[i], vs[i]) != n) throw InvalidArgument("structure: vectors must have equal length");
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (d.metric_an(vs[i], vs[j]) != 0) throw InvalidArgument("structure: vectors must be orthogonal");
    }
    return n;
}

/// max over w of |J²w + w|.
inline double square_residual(const Decomposition& d, const Vec<Rational>& t, const std::vector<Vec<Rational>>& ws) {
    double r = 0;
    for (const auto& w : ws) r = std::max(r, residual_of(add(d.bracket(t, d.bracket(t, w)), w)));
    return r;
}

inline double anticommute_residual(const Decomposition& d, const Vec<Rational>& a, const Vec<Rational>& b,
                                   const std::vector<Vec<Rational>>& ws) {
    double r = 0;
    for (const auto& w : ws)
        r = std::max(r, residual_of(add(d.bracket(a, d.bracket(b, w)), d.bracket(b, d.bracket(a, w)))));
    return r;
}

inline double k0_residual(const Decomposition& d, const Vec<Rational>& t) {
    return residual_of(sub(t, project(d, t, SubspaceTag::k0)));
}

}  // namespace detail

/// J = ad(T) with T = [θX,Y]/(|α|²⟨X,X⟩_AN): complex structure on g_{α₀}, g_{α₁}; J/2 on ℝX ⊕ ℝY.
inline StructureCertificate complex_structure(const Decomposition& d, const Vec<Rational>& x, const Vec<Rational>& y) {
    int lam = detail::common_root(d, {x, y});
    auto pr = detail::pair_of_sum(d, lam);
    if (d.pos_idx[lam].size() < 2) throw InvalidArgument("complex_structure: dim g_{α0+α1} < 2");
    Rational n = detail::common_norm(d, {x, y});
    Rational a2 = d.length_sq(pr.r0);
    Vec<Rational> txy = d.bracket(d.theta(x), y);
    StructureCertificate c;
    c.kind = "complex";
    c.generators = {scale(Rational(1 / (a2 * n)), txy)};
    const auto& t = c.generators[0];
    // on ℝX ⊕ ℝY the structure is (1/(2|λ|²)) ad[θX,Y]/n = ½ ad T
    Vec<Rational> th = scale(Rational(1, 2), t);
    c.residuals.push_back({"J^2+id on span{X,Y}", detail::square_residual(d, th, {x, y})});
    c.residuals.push_back({"J^2+id on g_a0", detail::square_residual(d, t, d.root_space(pr.r0))});
    c.residuals.push_back({"J^2+id on g_a1", detail::square_residual(d, t, d.root_space(pr.r1))});
    c.residuals.push_back({"[[thX,Y],X] - 2|l|^2 n Y",
                           residual_of(sub(d.bracket(txy, x), scale(Rational(2 * d.length_sq(lam) * n), y)))});
    c.residuals.push_back({"[thX,Y] in k0", detail::k0_residual(d, txy)});
    return c;
}

/// J₁ = ad K₁, J₂ = ad K₂, J₃ = J₁J₂ from an orthogonal triple of equal length in g_{α₀+α₁}.
inline StructureCertificate quaternionic_structure(const Decomposition& d, const Vec<Rational>& x,
                                                   const Vec<Rational>& y, const Vec<Rational>& z) {
    int lam = detail::common_root(d, {x, y, z});
    auto pr = detail::pair_of_sum(d, lam);
    if (d.pos_idx[lam].size() < 3) throw InvalidArgument("quaternionic_structure: dim g_{α0+α1} < 3");
    Rational n = detail::common_norm(d, {x, y, z});
    Rational f = 1 / (d.length_sq(pr.r0) * n);
    StructureCertificate c;
    c.kind = "quaternionic";
    c.generators = {scale(f, d.bracket(d.theta(x), y)), scale(f, d.bracket(d.theta(x), z))};
    const auto &k1 = c.generators[0], &k2 = c.generators[1];
    for (auto [r, name] : {std::pair{pr.r0, std::string("g_a0")}, std::pair{pr.r1, std::string("g_a1")}}) {
        auto ws = d.root_space(r);
        c.residuals.push_back({"J1^2+id on " + name, detail::square_residual(d, k1, ws)});
        c.residuals.push_back({"J2^2+id on " + name, detail::square_residual(d, k2, ws)});
        c.residuals.push_back({"J1J2+J2J1 on " + name, detail::anticommute_residual(d, k1, k2, ws)});
        double r3 = 0;  // J₃² = J₁J₂J₁J₂
        for (const auto& w : ws) {
            auto j3w = d.bracket(k1, d.bracket(k2, w));
            r3 = std::max(r3, residual_of(add(d.bracket(k1, d.bracket(k2, j3w)), w)));
        }
        c.residuals.push_back({"J3^2+id on " + name, r3});
    }
    c.residuals.push_back({"K1 in k0", detail::k0_residual(d, k1)});
    c.residuals.push_back({"K2 in k0", detail::k0_residual(d, k2)});
    return c;
}

struct ConstructedV {
    VSpec spec;
    StructureCertificate certificate;
    std::size_t dim_bracket;
};

/// V₀ = span{X₀, JX₀}, V₁ = span{X₁, JX₁} for J = ad T; requires J² = −id there and J|[V₀,V₁] = 0.
inline ConstructedV build_V_complex(const Decomposition& d, int i0, int i1, const Vec<Rational>& x0,
                                    const Vec<Rational>& x1, const Vec<Rational>& t, double tol = 1e-10) {
    require_pair(d, i0, i1);
    int r0 = d.simple_index(i0), r1 = d.simple_index(i1);
    require_in_root_space(d, {x0}, r0, "X0");
    require_in_root_space(d, {x1}, r1, "X1");
    std::vector<Vec<Rational>> v0{x0, d.bracket(t, x0)}, v1{x1, d.bracket(t, x1)};
    StructureCertificate c;
    c.kind = "complex";
    c.generators = {t};
    c.residuals.push_back({"J^2+id on V0", detail::square_residual(d, t, v0)});
    c.residuals.push_back({"J^2+id on V1", detail::square_residual(d, t, v1)});
    auto br = bracket_span(d, v0, v1);
    double vanish = 0;
    for (const auto& w : br) vanish = std::max(vanish, residual_of(d.bracket(t, w)));
    c.residuals.push_back({"J on [V0,V1]", vanish});
    c.residuals.push_back({"T in k0", detail::k0_residual(d, t)});
    if (!c.valid(tol))
        throw InvalidArgument("build_V_complex: structure residual " + std::to_string(c.max_residual()) +
                              " exceeds tolerance");
    if (rank(v0) != 2 || rank(v1) != 2 || br.size() != 2)
        throw ConsistencyError("complex-bracket-dim",
                               "dim [V0,V1] = " + std::to_string(br.size()) + ", expected 2 = dim V0");
    ConstructedV out{case_II_spec(d, i0, i1, v0, v1), c, br.size()};
    out.spec.case_tag = "II-ii-b";
    return out;
}

/// V_k = span{X_k, J₁X_k, J₂X_k, J₃X_k}; same residual requirements for all three structures.
inline ConstructedV build_V_quaternionic(const Decomposition& d, int i0, int i1, const Vec<Rational>& x0,
                                         const Vec<Rational>& x1, const Vec<Rational>& k1, const Vec<Rational>& k2,
                                         double tol = 1e-10) {
    require_pair(d, i0, i1);
    int r0 = d.simple_index(i0), r1 = d.simple_index(i1);
    require_in_root_space(d, {x0}, r0, "X0");
    require_in_root_space(d, {x1}, r1, "X1");
    auto span4 = [&](const Vec<Rational>& x) {
        auto j2 = d.bracket(k2, x);
        return std::vector<Vec<Rational>>{x, d.bracket(k1, x), j2, d.bracket(k1, j2)};
    };
    auto v0 = span4(x0), v1 = span4(x1);
    StructureCertificate c;
    c.kind = "quaternionic";
    c.generators = {k1, k2};
    for (auto [vs, name] : {std::pair{&v0, std::string("V0")}, std::pair{&v1, std::string("V1")}}) {
        c.residuals.push_back({"J1^2+id on " + name, detail::square_residual(d, k1, *vs)});
        c.residuals.push_back({"J2^2+id on " + name, detail::square_residual(d, k2, *vs)});
        c.residuals.push_back({"J1J2+J2J1 on " + name, detail::anticommute_residual(d, k1, k2, *vs)});
    }
    auto br = bracket_span(d, v0, v1);
    double vanish = 0;
    for (const auto& w : br)
        vanish = std::max({vanish, residual_of(d.bracket(k1, w)), residual_of(d.bracket(k2, w))});
    c.residuals.push_back({"J on [V0,V1]", vanish});
    if (!c.valid(tol))
        throw InvalidArgument("build_V_quaternionic: structure residual " + std::to_string(c.max_residual()) +
                              " exceeds tolerance");
    if (rank(v0) != 4 || rank(v1) != 4 || br.size() != 4)
        throw ConsistencyError("quaternionic-bracket-dim",
                               "dim [V0,V1] = " + std::to_string(br.size()) + ", expected 4 = dim V0");
    ConstructedV out{case_II_spec(d, i0, i1, v0, v1), c, br.size()};
    out.spec.case_tag = "II-ii-c";
    return out;
}

/// Case (II)(ii)(b) from basis data: X, Y ∈ g_{α₀+α₁} and T = [θX,Y]/(|α|²|X|²); X₀ the first basis
/// vector of g_{α₀}; X₁ searched over the basis of g_{α₁}.
inline ConstructedV complex_example(const Decomposition& d, int i0, int i1) {
    require_pair(d, i0, i1);
    int top = d.root_index(d.sys.simple(i0) + d.sys.simple(i1));
    auto g = d.root_space(top);
    if (g.size() < 2) throw InvalidArgument("complex_example: dim g_{α0+α1} < 2");
    auto cert = complex_structure(d, g[0], g[1]);
    const auto& t = cert.generators[0];
    auto x0 = d.root_space(d.simple_index(i0))[0];
    std::string last;
    for (const auto& x1 : d.root_space(d.simple_index(i1))) {
        try {
            auto out = build_V_complex(d, i0, i1, x0, x1, t);
            for (auto& r : cert.residuals) out.certificate.residuals.push_back(r);
            return out;
        } catch (const InvalidArgument& e) {
            last = e.what();
        }
    }
    throw InvalidArgument("complex_example: no basis vector of g_α1 admits a valid T (" + last + ")");
}

// ---- obstruction blocks ----------------------------------------------------

enum class BlockKind { G2, orthogonal4, case_ii_3x3, case_iii_6x6, tail_3x3 };

inline BlockKind parse_block_kind(const std::string& s) {
    if (s == "G2") return BlockKind::G2;
    if (s == "orthogonal4") return BlockKind::orthogonal4;
    if (s == "case-ii-3x3") return BlockKind::case_ii_3x3;
    if (s == "case-iii-6x6") return BlockKind::case_iii_6x6;
    if (s == "tail-3x3") return BlockKind::tail_3x3;
    throw InvalidArgument("unknown block kind '" + s + "'");
}

inline std::string to_string(BlockKind k) {
    switch (k) {
        case BlockKind::G2: return "G2";
        case BlockKind::orthogonal4: return "orthogonal4";
        case BlockKind::case_ii_3x3: return "case-ii-3x3";
        case BlockKind::case_iii_6x6: return "case-iii-6x6";
        case BlockKind::tail_3x3: return "tail-3x3";
    }
    return "?";
}

struct ObstructionBlock {
    BlockKind kind;
    double phi;
    Matrix<double> matrix;
    Vec<double> spectrum;   ///< sorted real parts
    double max_imag = 0;    ///< only for the non-symmetric G2 block
    bool symmetric = true;
};

/// The displayed G₂ matrix, exactly.
inline Matrix<Rational> g2_block_exact() {
    Matrix<Rational> m(3, 3);
    m(0, 1) = 4;
    m(1, 0) = Rational(1, 2);
    m(1, 2) = 3;
    m(2, 1) = Rational(1, 2);
    return m;
}

/// Model block matrices; `alpha_len` is |α₀| (ignored for G2).
inline ObstructionBlock obstruction_block(BlockKind kind, double phi, double alpha_len = std::sqrt(2.0)) {
    const double pi = std::acos(-1.0);
    if (kind != BlockKind::G2 && (phi < -1e-15 || phi > pi / 2 + 1e-15))
        throw InvalidArgument("obstruction_block: φ must lie in [0, π/2]");
    ObstructionBlock b{kind, phi, {}, {}, 0, true};
    double c = std::cos(phi), s = std::sin(phi), r = std::sqrt(2.0), f = alpha_len / 2;
    auto fill = [&](std::vector<std::vector<double>> rows) {
        b.matrix = Matrix<double>(rows.size(), rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows.size(); ++j) b.matrix(i, j) = f * rows[i][j];
    };
    switch (kind) {
        case BlockKind::G2: {
            auto m = g2_block_exact();
            b.matrix = to_double(m);
            b.symmetric = false;
            for (const auto& z : eigenvalues_3x3(m)) {
                b.spectrum.push_back(z.real());
                b.max_imag = std::max(b.max_imag, std::abs(z.imag()));
            }
            std::sort(b.spectrum.begin(), b.spectrum.end());
            return b;
        }
        case BlockKind::orthogonal4:
            fill({{0, c, s, 0}, {c, 0, 0, s}, {s, 0, 0, c}, {0, s, c, 0}});
            break;
        case BlockKind::case_ii_3x3:
            fill({{0, c, 0}, {c, 0, s}, {0, s, 0}});
            break;
        case BlockKind::tail_3x3:
            fill({{0, s, 0}, {s, 0, c}, {0, c, 0}});
            break;
        case BlockKind::case_iii_6x6:
            fill({{0, r * c, 0, 0, 0, 0},
                  {r * c, 0, r * c, s, 0, 0},
                  {0, r * c, 0, 0, r * s, 0},
                  {0, s, 0, 0, c, 0},
                  {0, 0, r * s, c, 0, r * s},
                  {0, 0, 0, 0, r * s, 0}});
            break;
    }
    b.spectrum = symmetric_eigenvalues(b.matrix);
    return b;
}

inline ObstructionBlock obstruction_block(const std::string& kind, double phi, double alpha_len = std::sqrt(2.0)) {
    return obstruction_block(parse_block_kind(kind), phi, alpha_len);
}

// ---- A₂ trials and scans ---------------------------------------------------

struct A2Trial {
    std::vector<Vec<Rational>> v0, v1;
    Characterization algebraic;
    CpcVerdict sweep;
};

inline A2Trial run_a2_trial(DecompPtr dp, int i0, int i1, std::vector<Vec<Rational>> v0,
                            std::vector<Vec<Rational>> v1, const SamplerConfig& cfg) {
    A2Trial t;
    t.algebraic = characterization_check(*dp, i0, i1, v0, v1);
    auto o = build_case_II(dp, i0, i1, v0, v1);
    t.sweep = cpc_sweep(o, cfg);
    t.v0 = std::move(v0);
    t.v1 = std::move(v1);
    return t;
}

struct ScanReport {
    int trials = 0;
    int algebraic_cpc = 0;                   ///< characterization_check true
    int sweep_cpc = 0;                       ///< sweep verdict true
    int mismatches = 0;                      ///< verdicts disagree
    std::map<std::size_t, int> bracket_dims; ///< histogram of dim [V₀,V₁]
    double max_deviation_when_cpc = 0;
    double min_deviation_when_not = 1e300;
    std::vector<int> mismatch_trials;
};

inline void record_trial(ScanReport& r, int t, const A2Trial& a) {
    ++r.trials;
    r.algebraic_cpc += a.algebraic.cpc;
    r.sweep_cpc += a.sweep.is_cpc;
    ++r.bracket_dims[a.algebraic.dim_bracket];
    if (a.algebraic.cpc != a.sweep.is_cpc) {
        ++r.mismatches;
        r.mismatch_trials.push_back(t);
    }
    if (a.algebraic.cpc) r.max_deviation_when_cpc = std::max(r.max_deviation_when_cpc, a.sweep.max_spectrum_deviation);
    else r.min_deviation_when_not = std::min(r.min_deviation_when_not, a.sweep.max_spectrum_deviation);
}

/// Seeded (d₀,d₁)-subspace pairs: even trials random integer combinations, odd trials coordinate subsets.
inline ScanReport codimension_scan(DecompPtr dp, int i0, int i1, std::size_t d0, std::size_t d1, int trials,
                                   std::uint64_t seed, SamplerConfig cfg = {}) {
    require_pair(*dp, i0, i1);
    auto g0 = dp->root_space(dp->simple_index(i0)), g1 = dp->root_space(dp->simple_index(i1));
    if (d0 < 1 || d1 < 1 || d0 > g0.size() || d1 > g1.size())
        throw InvalidArgument("codimension_scan: dims must satisfy 1 <= d_k <= dim g_{α_k}");
    ScanReport r;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(derive_seed(seed, t));
        std::vector<Vec<Rational>> v0, v1;
        if (t % 2 == 0) {
            v0 = random_subspace(rng, g0, d0);
            v1 = random_subspace(rng, g1, d1);
        } else {
            v0 = random_coordinate_subspace(rng, g0, d0);
            v1 = random_coordinate_subspace(rng, g1, d1);
        }
        cfg.seed = derive_seed(seed ^ 0x5eedULL, t);
        record_trial(r, t, run_a2_trial(dp, i0, i1, std::move(v0), std::move(v1), cfg));
    }
    return r;
}

/// Sweep verdict against characterization_check over random dimensions and subspaces.
inline ScanReport equivalence_scan(DecompPtr dp, int i0, int i1, int trials, std::uint64_t seed,
                                   SamplerConfig cfg = {}) {
    require_pair(*dp, i0, i1);
    auto g0 = dp->root_space(dp->simple_index(i0)), g1 = dp->root_space(dp->simple_index(i1));
    ScanReport r;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(derive_seed(seed, t));
        std::uniform_int_distribution<std::size_t> u0(1, g0.size()), u1(1, g1.size());
        std::size_t d0 = u0(rng), d1 = rng() % 2 ? d0 : u1(rng);
        d1 = std::min(d1, g1.size());
        std::vector<Vec<Rational>> v0, v1;
        if (t % 2 == 0) {
            v0 = random_subspace(rng, g0, d0);
            v1 = random_subspace(rng, g1, d1);
        } else {
            v0 = random_coordinate_subspace(rng, g0, d0);
            v1 = random_coordinate_subspace(rng, g1, d1);
        }
        cfg.seed = derive_seed(seed ^ 0x5eedULL, t);
        record_trial(r, t, run_a2_trial(dp, i0, i1, std::move(v0), std::move(v1), cfg));
    }
    return r;
}

// ---- length obstruction in so(2, 2+n) --------------------------------------

struct WitnessSample {
    double phi;
    double expected;    ///< sin(φ)|α₂|/2
    double rayleigh;    ///< ⟨S_ξ w, w⟩/⟨w, w⟩
    double residual;    ///< |S_ξ w − expected·w|∞
};

struct LengthObstruction {
    CpcVerdict verdict;
    double alpha2_len;
    int short_simple, long_simple;
    std::vector<WitnessSample> witness;
};

/// V_{α₁} = first n−1 basis vectors of the short root space, V_{α₂} = g_{α₂} (long);
/// witness X + φ_{ξ₂}(X) with X spanning g_{α₁}^⊤.
inline LengthObstruction length_obstruction_scenario(DecompPtr dp, SamplerConfig cfg = {}, int grid = 33) {
    const auto& d = *dp;
    if (d.sys.family != Family::B || d.sys.rank != 2)
        throw InvalidArgument("length_obstruction: expects a B2 realization so(2,2+n)");
    LengthObstruction L;
    int s0 = d.simple_index(0), s1 = d.simple_index(1);
    bool first_long = d.length_sq(s0) > d.length_sq(s1);
    L.long_simple = first_long ? 0 : 1;
    L.short_simple = first_long ? 1 : 0;
    int rl = d.simple_index(L.long_simple), rs = d.simple_index(L.short_simple);
    auto gs = d.root_space(rs);
    if (gs.size() < 2) throw InvalidArgument("length_obstruction: needs n >= 2");
    if (d.pos_idx[rl].size() != 1) throw InvalidArgument("length_obstruction: dim g_{α2} must be 1");
    std::vector<Vec<Rational>> vs(gs.begin(), gs.end() - 1);
    VSpec v;
    v.case_tag = "custom";
    v.entries = {{rs, vs}, {rl, d.root_space(rl)}};
    auto o = build_orbit(dp, v);
    L.verdict = cpc_sweep(o, cfg);
    L.alpha2_len = std::sqrt(d.length_sq(rl).get_d());

    int x_col = -1;
    for (int i = 0; i < o.dim_s(); ++i)
        if (o.tangent_root[i] == rs) x_col = i;
    const auto& x = o.tangent[x_col];
    const auto& xi1 = o.normal[0];
    const auto& xi2 = o.normal[o.dim_v() - 1];
    Vec<double> w = add(x, phi_apply(d, xi2, x));
    const double pi = std::acos(-1.0);
    for (int k = 0; k < grid; ++k) {
        double phi = grid == 1 ? 0 : (pi / 2) * k / (grid - 1);
        Vec<double> xi = add(scale(std::cos(phi), xi1), scale(std::sin(phi), xi2));
        auto sw = shape_apply(o, xi, w);
        double expected = std::sin(phi) * L.alpha2_len / 2;
        L.witness.push_back({phi, expected, d.metric_an(sw, w) / d.metric_an(w, w),
                             norm_inf(sub(sw, scale(expected, w)))});
    }
    return L;
}

// ---- commutation identity --------------------------------------------------

struct CommutationResult {
    double ad_residual;        ///< |[ξ_{k+1},[ξ_k,Y]] − 2[ξ_k,[ξ_{k+1},Y]]|∞
    double phi_ratio;          ///< ⟨L,R⟩/⟨R,R⟩ for L = φ_{k+1}φ_k Y, R = φ_kφ_{k+1} Y
    double phi_residual_2;     ///< |L − 2R|∞
    double phi_residual_1;     ///< |L − R|∞
    double norm_l, norm_r;
};

/// Evaluated on Y = φ_{ξ_k}(X) for X over an orthonormal basis of g_λ^⊤, λ the len6 representative.
inline CommutationResult commutation_identity(const OrbitModel& o, int block_index) {
    const auto& b = o.partition.at(block_index);
    if (!b.cls || b.cls->shape != ClassShape::len6) throw InvalidArgument("commutation_identity: block is not len6");
    const Decomposition& d = o.d();
    const auto& m = b.cls->members;
    int ak = d.root_index(m[1].coeffs - m[0].coeffs), ak1 = d.root_index(m[2].coeffs - m[1].coeffs);
    int lam = d.root_index(m[0].coeffs);
    auto unit_normal = [&](int r) {
        for (int i = 0; i < o.dim_v(); ++i)
            if (o.normal_root[i] == r) return o.normal[i];
        throw InvalidArgument("commutation_identity: no normal vector in g_" + coeffs_label(d.root(r)));
    };
    auto xk = unit_normal(ak), xk1 = unit_normal(ak1);
    CommutationResult c{0, 0, 0, 0, 0, 0};
    bool any = false;
    for (int i = 0; i < o.dim_s(); ++i) {
        if (o.tangent_root[i] != lam) continue;
        any = true;
        auto y = phi_apply(d, xk, o.tangent[i]);
        auto l2 = d.bracket(xk1, d.bracket(xk, y)), r2 = d.bracket(xk, d.bracket(xk1, y));
        c.ad_residual = std::max(c.ad_residual, norm_inf(sub(l2, scale(2.0, r2))));
        auto L = phi_apply(d, xk1, phi_apply(d, xk, y));
        auto R = phi_apply(d, xk, phi_apply(d, xk1, y));
        c.phi_ratio = d.metric_an(L, R) / d.metric_an(R, R);
        c.phi_residual_2 = std::max(c.phi_residual_2, norm_inf(sub(L, scale(2.0, R))));
        c.phi_residual_1 = std::max(c.phi_residual_1, norm_inf(sub(L, R)));
        c.norm_l = std::sqrt(d.metric_an(L, L));
        c.norm_r = std::sqrt(d.metric_an(R, R));
    }
    if (!any) throw InvalidArgument("commutation_identity: g_λ has no tangent part");
    return c;
}

// ---- normalizer certificate ------------------------------------------------

struct NormalizerReport {
    std::size_t k_dim = 0;
    std::size_t tangent_normalizer_dim = 0;   ///< dim{Z ∈ k : [Z,(1−θ)s] ⊆ (1−θ)s}
    std::size_t m_dim = 0;                    ///< after closing l = s ⊕ m under brackets
    int refinement_steps = 0;
    int dim_v = 0;
    std::vector<std::size_t> orbit_rank_at_xi;
    bool transitive_possible = true;
    std::optional<Vec<Rational>> witness_xi;   ///< first ξ with rank < dim V
};

namespace detail {

/// Coefficients t with Σ t_j z_j satisfying rows built by `row_of`.
inline std::vector<Vec<Rational>> combine(const std::vector<Vec<Rational>>& zs, const std::vector<Vec<Rational>>& coeffs,
                                          std::size_t dim) {
    std::vector<Vec<Rational>> out;
    for (const auto& c : coeffs) {
        Vec<Rational> z = zeros<Rational>(dim);
        for (std::size_t j = 0; j < zs.size(); ++j)
            if (c[j] != 0) axpy(c[j], zs[j], z);
        out.push_back(std::move(z));
    }
    return out;
}

}  // namespace detail

/// Upper bound for the Lie algebra m of N_K(S·o), exact.
///  m₀ = {Z ∈ k : [Z,(1−θ)s] ⊆ (1−θ)s}; then m_{i+1} = {Z ∈ m_i : [Z, s ⊕ m_i] ⊆ s ⊕ m_i}, since
///  l = s ⊕ m is the Lie algebra of N_G(S·o). Orbit rank of ξ is dim([m,(1−θ)ξ] + ℝ(1−θ)ξ).
inline NormalizerReport normalizer_check(const OrbitModel& o, std::uint64_t seed = 42, int random_samples = 16) {
    const Decomposition& d = o.d();
    NormalizerReport rep;
    rep.dim_v = o.dim_v();
    std::vector<Vec<Rational>> kb;
    for (int i = 0; i < d.dim; ++i) {
        auto e = unit<Rational>(d.dim, i);
        kb.push_back(add(e, d.theta(e)));
    }
    kb = independent_subset(kb);
    rep.k_dim = kb.size();
    auto one_minus_theta = [&](const Vec<Rational>& x) { return sub(x, d.theta(x)); };
    std::vector<Vec<Rational>> ps, pv;
    for (const auto& w : o.prebasis) ps.push_back(one_minus_theta(w));
    for (const auto& v : o.v_basis) pv.push_back(one_minus_theta(v));

    Matrix<Rational> cond(ps.size() * pv.size(), kb.size());
    for (std::size_t j = 0; j < kb.size(); ++j)
        for (std::size_t a = 0; a < ps.size(); ++a) {
            auto br = d.bracket(kb[j], ps[a]);
            for (std::size_t b = 0; b < pv.size(); ++b) cond(a * pv.size() + b, j) = d.inner(br, pv[b]);
        }
    std::vector<Vec<Rational>> m = detail::combine(kb, kernel(cond), d.dim);
    rep.tangent_normalizer_dim = m.size();

    for (;;) {
        if (m.empty()) break;
        std::vector<Vec<Rational>> l = o.prebasis;
        l.insert(l.end(), m.begin(), m.end());
        auto ann = kernel(Matrix<Rational>::from_rows(l, d.dim));
        if (ann.empty()) break;
        Matrix<Rational> c2(l.size() * ann.size(), m.size());
        for (std::size_t j = 0; j < m.size(); ++j)
            for (std::size_t a = 0; a < l.size(); ++a) {
                auto br = d.bracket(m[j], l[a]);
                for (std::size_t b = 0; b < ann.size(); ++b) c2(a * ann.size() + b, j) = dot(ann[b], br);
            }
        auto ker = kernel(c2);
        if (ker.size() == m.size()) break;
        m = detail::combine(m, ker, d.dim);
        ++rep.refinement_steps;
    }
    rep.m_dim = m.size();

    std::vector<Vec<Rational>> xis = o.v_basis;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < random_samples; ++s) xis.push_back(random_combination(rng, o.v_basis));
    for (const auto& xi : xis) {
        auto p = one_minus_theta(xi);
        std::vector<Vec<Rational>> span{p};
        for (const auto& z : m) span.push_back(d.bracket(z, p));
        std::size_t r = rank(span);
        rep.orbit_rank_at_xi.push_back(r);
        if (int(r) != rep.dim_v && rep.transitive_possible) {
            rep.transitive_possible = false;
            rep.witness_xi = xi;
        }
    }
    return rep;
}

}  // namespace cpc
