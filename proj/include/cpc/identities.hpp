#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cpc/geometry.hpp"

namespace cpc {

/// One exact identity checked on one algebra.
struct IdentityRow {
    std::string algebra;
    std::string identity;
    long instances = 0;
    long failures = 0;
    std::string first_failure;

    bool pass() const { return failures == 0; }
};

struct IdentityOptions {
    bool exhaustive = false;      ///< all basis triples regardless of dimension
    int exhaustive_dim = 12;      ///< triples are exhaustive up to this dimension
    int random_triples = 1000;
    std::uint64_t seed = 42;
};

/// Realized spaces used by the battery and the CLI.
struct SpaceSpec {
    std::string family;
    int n = 3;
    int q = 0;

    std::string label() const {
        return family + "(" + std::to_string(n) + (q ? "," + std::to_string(q) : "") + ")";
    }
};

inline std::vector<SpaceSpec> standard_spaces() {
    return {{"sl_real", 3}, {"sl_complex", 3}, {"sl_quaternion", 3}, {"sl_real", 4}, {"sp_real", 3}, {"so_pq", 2, 5}};
}

namespace detail {

class Tally {
public:
    Tally(std::string algebra, std::string identity) {
        row_.algebra = std::move(algebra);
        row_.identity = std::move(identity);
    }

    void check(bool ok, const std::function<std::string()>& what) {
        ++row_.instances;
        if (ok) return;
        if (row_.failures++ == 0) row_.first_failure = what();
    }
    IdentityRow done() const { return row_; }

private:
    IdentityRow row_;
};

struct Triple {
    int i, j, k;
};

inline std::vector<Triple> basis_triples(int dim, bool ordered, const IdentityOptions& opt, std::uint64_t stream) {
    std::vector<Triple> out;
    if (opt.exhaustive || dim <= opt.exhaustive_dim) {
        for (int i = 0; i < dim; ++i)
            for (int j = ordered ? 0 : i + 1; j < dim; ++j)
                for (int k = ordered ? 0 : j + 1; k < dim; ++k) out.push_back({i, j, k});
        return out;
    }
    std::mt19937_64 rng(derive_seed(opt.seed, stream));
    std::uniform_int_distribution<int> u(0, dim - 1);
    for (int t = 0; t < opt.random_triples; ++t) out.push_back({u(rng), u(rng), u(rng)});
    return out;
}

/// Σ_t v_t g(t, k), skipping zeros.
inline Rational form_with_unit(const Matrix<Rational>& g, const Vec<Rational>& v, int k) {
    Rational s = 0;
    for (std::size_t t = 0; t < v.size(); ++t)
        if (v[t] != 0 && g(t, k) != 0) s += v[t] * g(t, k);
    return s;
}

inline std::string triple_str(const LieAlgebra& g, int i, int j, int k) {
    return "(" + g.labels[i] + ", " + g.labels[j] + ", " + g.labels[k] + ")";
}

inline bool proportional(const Coeffs& a, const Coeffs& b) {
    Vec<Rational> x(a.begin(), a.end()), y(b.begin(), b.end());
    return rank({x, y}) < 2;
}

}  // namespace detail

/// Structural identities of the algebra: antisymmetry, Jacobi, Killing invariance, θ, B_θ.
inline std::vector<IdentityRow> structure_identities(const Decomposition& d, const IdentityOptions& opt = {}) {
    const LieAlgebra& g = d.g();
    const int n = d.dim;
    auto e = [&](int i) { return unit<Rational>(n, i); };
    std::vector<IdentityRow> rows;

    detail::Tally anti(g.name, "antisymmetry");
    detail::Tally aut(g.name, "theta-automorphism");
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            auto xy = d.bracket(e(i), e(j));
            anti.check(is_zero(add(xy, d.bracket(e(j), e(i)))), [&] { return "[" + g.labels[i] + "," + g.labels[j] + "]"; });
            auto lhs = d.theta(xy);
            aut.check(lhs == d.bracket(d.theta(e(i)), d.theta(e(j))),
                      [&] { return "θ[" + g.labels[i] + "," + g.labels[j] + "]"; });
        }
    rows.push_back(anti.done());

    detail::Tally jac(g.name, "jacobi");
    for (auto [i, j, k] : detail::basis_triples(n, false, opt, 1)) {
        auto x = e(i), y = e(j), z = e(k);
        auto s = add(add(d.bracket(x, d.bracket(y, z)), d.bracket(y, d.bracket(z, x))), d.bracket(z, d.bracket(x, y)));
        jac.check(is_zero(s), [&] { return detail::triple_str(g, i, j, k); });
    }
    rows.push_back(jac.done());

    detail::Tally kil(g.name, "killing-ad-invariance");
    detail::Tally cin(g.name, "cartan-inner");
    for (auto [i, j, k] : detail::basis_triples(n, true, opt, 2)) {
        auto x = e(i), y = e(j), z = e(k);
        // B([X,Y],Z) = B(X,[Y,Z])
        Rational l = detail::form_with_unit(g.killing, d.bracket(x, y), k);
        Rational r = detail::form_with_unit(g.killing, d.bracket(y, z), i);
        kil.check(l == r, [&] { return detail::triple_str(g, i, j, k); });
        // ⟨[X,Y],Z⟩ = −⟨Y,[θX,Z]⟩
        Rational a = detail::form_with_unit(d.gram, d.bracket(x, y), k);
        Rational b = detail::form_with_unit(d.gram, d.bracket(d.theta(x), z), j);
        cin.check(a == -b, [&] { return detail::triple_str(g, i, j, k); });
    }
    rows.push_back(kil.done());

    detail::Tally inv(g.name, "theta-involution");
    for (int i = 0; i < n; ++i) inv.check(d.theta(d.theta(e(i))) == e(i), [&] { return g.labels[i]; });
    rows.push_back(inv.done());
    rows.push_back(aut.done());

    detail::Tally pd(g.name, "b-theta-positive-definite");
    bool sym = g.b_theta == g.b_theta.transpose();
    pd.check(sym && positive_definite(g.b_theta), [&] { return sym ? "leading minor <= 0" : "not symmetric"; });
    rows.push_back(pd.done());
    rows.push_back(cin.done());
    return rows;
}

/// Identities of the restricted root space decomposition and the lemmas built on it.
inline std::vector<IdentityRow> root_identities(const Decomposition& d, const IdentityOptions& opt = {}) {
    const LieAlgebra& g = d.g();
    const auto& sys = d.sys;
    const int n = d.dim;
    const int np = d.num_positive();
    auto e = [&](int i) { return unit<Rational>(n, i); };
    auto lbl = [&](int r) { return coeffs_label(d.root(r)); };
    auto twice_positive = [&](int r) { return sys.positive_index(2 * d.root(r)).has_value(); };
    std::vector<IdentityRow> rows;
    std::mt19937_64 rng(derive_seed(opt.seed, 3));

    // signed root coefficients of a basis index, nullopt on g0
    auto coeff_of = [&](int i) -> std::optional<Coeffs> {
        int r = d.root_of[i];
        if (r == 0) return std::nullopt;
        return r > 0 ? d.root(r - 1) : -1 * d.root(-r - 1);
    };
    auto in_space = [&](const Vec<Rational>& x, const std::optional<Coeffs>& c) {
        for (int i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            auto ci = coeff_of(i);
            if (ci.has_value() != c.has_value()) return false;
            if (c && *ci != *c) return false;
        }
        return true;
    };

    detail::Tally br(g.name, "bracket-relation");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto ci = coeff_of(i), cj = coeff_of(j);
            Coeffs zero(sys.rank, 0);
            Coeffs s = ci.value_or(zero) + cj.value_or(zero);
            auto x = d.bracket(e(i), e(j));
            bool ok;
            if (s == zero) ok = in_space(x, std::nullopt);
            else if (!sys.is_root(s)) ok = is_zero(x);
            else ok = in_space(x, s);
            br.check(ok, [&] { return "[" + g.labels[i] + "," + g.labels[j] + "]"; });
        }
    rows.push_back(br.done());

    detail::Tally th(g.name, "theta-root-space");
    for (int r = 0; r < np; ++r)
        for (int i : d.pos_idx[r]) th.check(in_space(d.theta(e(i)), -1 * d.root(r)), [&] { return g.labels[i]; });
    rows.push_back(th.done());

    detail::Tally g0(g.name, "g0-orthogonal-split");
    for (int i : d.a_idx)
        for (int k : d.k0_idx) g0.check(d.gram(i, k) == 0, [&] { return g.labels[i] + " ⟂ " + g.labels[k]; });
    {
        std::size_t total = d.a_idx.size() + d.k0_idx.size();
        for (int r = 0; r < np; ++r) total += d.pos_idx[r].size() + d.neg_idx[r].size();
        g0.check(total == std::size_t(n), [&] { return "dimensions do not add up"; });
        g0.check(d.a_idx.size() == std::size_t(sys.rank), [&] { return "dim a != rank"; });
    }
    rows.push_back(g0.done());

    detail::Tally mult(g.name, "multiplicities");
    for (int r = 0; r < np; ++r)
        mult.check(int(d.pos_idx[r].size()) == sys.multiplicities[r] && d.pos_idx[r].size() == d.neg_idx[r].size(),
                   [&] { return lbl(r); });
    rows.push_back(mult.done());

    detail::Tally rsd(g.name, "root-space-dimension");
    for (int a = 0; a < np; ++a)
        for (int l = 0; l < np; ++l) {
            if (detail::proportional(d.root(a), d.root(l))) continue;
            auto str = sys.alpha_string(d.root(a), d.root(l));
            if (str.front().coeffs != d.root(l)) continue;  // λ must be the bottom
            bool all_pos = std::all_of(str.begin(), str.end(), [&](const RootVector& v) { return sys.positive_index(v.coeffs).has_value(); });
            if (!all_pos) continue;
            auto dm = [&](const Coeffs& c) { return d.pos_idx[d.root_index(c)].size(); };
            if (str.size() == 2) {
                int A = sys.cartan_integer(d.root(a), d.root(l));
                rsd.check(A == -1 && dm(str[0].coeffs) == dm(str[1].coeffs), [&] { return lbl(a) + "-string of " + lbl(l); });
            } else if (str.size() == 3) {
                int A = sys.cartan_integer(d.root(a), d.root(l));
                rsd.check(A == -2 && dm(d.root(a)) == dm(str[1].coeffs) && dm(str[0].coeffs) == dm(str[2].coeffs),
                          [&] { return lbl(a) + "-string of " + lbl(l); });
            }
        }
    rows.push_back(rsd.done());

    // lemma a,k0
    detail::Tally l1(g.name, "a-k0-i");
    detail::Tally l2(g.name, "a-k0-ii");
    detail::Tally l3(g.name, "a-k0-iii");
    detail::Tally l4(g.name, "a-k0-iv");
    detail::Tally qk(g.name, "quaternionic-k0");
    for (int r = 0; r < np; ++r) {
        auto ob = orthogonalize(d.root_space(r), d.gram_an);
        auto hl = d.h_lambda[r];
        auto check_i = [&](const Vec<Rational>& x) {
            auto lhs = d.bracket(d.theta(x), x);
            l1.check(lhs == scale(2 * d.metric_an(x, x), hl), [&] { return lbl(r); });
        };
        for (const auto& x : ob) check_i(x);
        for (int t = 0; t < 4; ++t) check_i(random_combination(rng, ob));
        for (std::size_t a = 0; a < ob.size(); ++a)
            for (std::size_t b = 0; b < ob.size(); ++b) {
                if (a == b) continue;
                auto t = d.bracket(d.theta(ob[a]), ob[b]);
                l2.check(t == project(d, t, SubspaceTag::k0), [&] { return lbl(r) + " pair " + std::to_string(a) + "," + std::to_string(b); });
            }
        if (twice_positive(r)) continue;
        const Rational len = d.length_sq(r);
        for (std::size_t a = 0; a < ob.size(); ++a) {
            const auto& x = ob[a];
            auto tx = d.theta(x);
            Rational xx = d.metric_an(x, x);
            std::vector<Vec<Rational>> ad_y;
            for (std::size_t b = 0; b < ob.size(); ++b) ad_y.push_back(b == a ? Vec<Rational>() : d.bracket(tx, ob[b]));
            for (std::size_t b = 0; b < ob.size(); ++b)
                for (std::size_t c = 0; c < ob.size(); ++c) {
                    if (b == a || c == a) continue;
                    Rational lhs = d.inner(ad_y[b], ad_y[c]);
                    Rational rhs = 4 * len * xx * d.metric_an(ob[b], ob[c]);
                    l3.check(lhs == rhs, [&] { return lbl(r); });
                }
            for (std::size_t b = 0; b < ob.size(); ++b) {
                if (b == a) continue;
                l4.check(is_zero(levi_civita(d, x, ob[b])), [&] { return lbl(r); });
            }
        }
        if (ob.size() >= 3)
            for (std::size_t a = 0; a < ob.size(); ++a)
                for (std::size_t b = 0; b < ob.size(); ++b)
                    for (std::size_t c = 0; c < ob.size(); ++c) {
                        if (a == b || b == c || a == c) continue;
                        auto v = d.bracket(d.bracket(d.theta(ob[a]), ob[b]), ob[c]);
                        qk.check(is_zero(v), [&] { return lbl(r); });
                    }
    }
    rows.push_back(l1.done());
    rows.push_back(l2.done());
    rows.push_back(l3.done());
    rows.push_back(l4.done());

    // lemma ad over all minimum-level pairs (γ, ν); ξ is not normalized, so identities carry n = ⟨ξ,ξ⟩_AN
    detail::Tally a1(g.name, "ad-i");
    detail::Tally a2(g.name, "ad-ii");
    detail::Tally a3(g.name, "ad-iii");
    detail::Tally a4(g.name, "ad-iv");
    for (int nu = 0; nu < np; ++nu)
        for (int ga = 0; ga < np; ++ga) {
            const Coeffs& cn = d.root(nu);
            const Coeffs& cg = d.root(ga);
            if (detail::proportional(cn, cg)) continue;
            if (sys.is_root_or_zero(cg - cn)) continue;
            if (!sys.is_root(cg + cn)) continue;
            const int A0 = sys.cartan_integer(cn, cg);
            const int A1 = sys.cartan_integer(cn, cg + cn);
            const Rational nl = d.length_sq(nu);
            auto xs = d.root_space(ga);
            auto xis = d.root_space(nu);
            xis.push_back(random_combination(rng, xis));
            auto pair = [&] { return "ν=" + coeffs_label(cn) + " γ=" + coeffs_label(cg); };
            for (const auto& xi : xis) {
                Rational nx = d.metric_an(xi, xi);
                auto txi = d.theta(xi);
                std::vector<Vec<Rational>> ax;
                for (const auto& x : xs) ax.push_back(d.bracket(xi, x));
                for (std::size_t a = 0; a < xs.size(); ++a)
                    for (std::size_t b = 0; b < xs.size(); ++b)
                        a1.check(d.metric_an(ax[a], ax[b]) == -nx * A0 * nl * d.metric_an(xs[a], xs[b]), pair);
                for (std::size_t a = 0; a < xs.size(); ++a) {
                    const auto& x = xs[a];
                    a2.check(d.bracket(txi, ax[a]) == scale(nx * A0 * nl, x), pair);
                    auto x2 = d.bracket(xi, ax[a]);
                    a3.check(d.bracket(txi, x2) == scale(nx * (A1 + A0) * nl, ax[a]), pair);
                    if (A0 <= -2) {
                        const int A2 = sys.cartan_integer(cn, cg + 2 * cn);
                        auto x3 = d.bracket(xi, x2);
                        a4.check(d.bracket(txi, x3) == scale(nx * (A2 + A1 + A0) * nl, x2), pair);
                    }
                }
            }
        }
    rows.push_back(a1.done());
    rows.push_back(a2.done());
    rows.push_back(a3.done());
    rows.push_back(a4.done());
    rows.push_back(qk.done());
    return rows;
}

/// Full exact battery on one decomposition.
inline std::vector<IdentityRow> identity_battery(const Decomposition& d, const IdentityOptions& opt = {}) {
    auto rows = structure_identities(d, opt);
    auto more = root_identities(d, opt);
    rows.insert(rows.end(), more.begin(), more.end());
    return rows;
}

}  // namespace cpc
