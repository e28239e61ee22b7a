#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cpc/linalg.hpp"

namespace cpc {

enum class Family { A, B, C, D, BC, G2 };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::A: return "A";
        case Family::B: return "B";
        case Family::C: return "C";
        case Family::D: return "D";
        case Family::BC: return "BC";
        case Family::G2: return "G2";
    }
    return "?";
}

/// Coordinates over the simple roots.
using Coeffs = std::vector<int>;

struct RootVector {
    Coeffs coeffs;
    Rational length_sq;

    bool operator==(const RootVector& o) const { return coeffs == o.coeffs; }
};

inline Coeffs operator+(Coeffs a, const Coeffs& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline Coeffs operator-(Coeffs a, const Coeffs& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline Coeffs operator*(int s, Coeffs a) {
    for (auto& x : a) x *= s;
    return a;
}

inline std::string coeffs_label(const Coeffs& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (!s.empty()) s += c[i] > 0 ? "+" : "-";
        else if (c[i] < 0) s += "-";
        int a = std::abs(c[i]);
        if (a != 1) s += std::to_string(a);
        s += "a" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

enum class ClassShape { singleton, len3, len6 };

inline std::string to_string(ClassShape s) {
    switch (s) {
        case ClassShape::singleton: return "singleton";
        case ClassShape::len3: return "len3";
        case ClassShape::len6: return "len6";
    }
    return "?";
}

/// (α₀,α₁)-equivalence class of a positive root, members in the order of the structure lemma.
struct StringClass {
    RootVector representative;
    std::vector<RootVector> members;
    ClassShape shape;
};

/// Abstract restricted root system. Simple roots are indexed 0..rank-1.
class AbstractRootSystem {
public:
    Family family;
    int rank;
    std::vector<RootVector> simple_roots;
    Matrix<int> cartan_matrix;            ///< A(i,j) = A_{α_i, α_j}
    std::vector<RootVector> positive_roots;  ///< sorted by level, then coeffs
    std::vector<int> reduced_simple;      ///< indices of Π′
    Matrix<Rational> inner_product;       ///< Gram matrix of the simple roots
    std::vector<int> multiplicities;      ///< per positive root (1 unless given)

    Rational inner(const Coeffs& a, const Coeffs& b) const {
        Rational s = 0;
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                if (a[i] != 0 && b[j] != 0) s += a[i] * b[j] * inner_product(i, j);
        return s;
    }

    RootVector make(const Coeffs& c) const { return RootVector{c, inner(c, c)}; }

    std::optional<int> positive_index(const Coeffs& c) const {
        auto it = index_.find(c);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Membership in Δ (either sign, zero excluded).
    bool is_root(const Coeffs& c) const {
        if (index_.count(c)) return true;
        return index_.count(-1 * c) > 0;
    }
    bool is_root_or_zero(const Coeffs& c) const {
        return is_root(c) || std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
    }

    int level(const Coeffs& c) const {
        if (!positive_index(c)) throw InvalidArgument("level: " + coeffs_label(c) + " is not a positive root");
        int s = 0;
        for (int x : c) s += x;
        return s;
    }

    /// A_{α,λ} = 2⟨λ,α⟩/|α|².
    int cartan_integer(const Coeffs& alpha, const Coeffs& lambda) const {
        if (!is_root(alpha)) throw InvalidArgument("cartan_integer: " + coeffs_label(alpha) + " is not a root");
        if (!is_root_or_zero(lambda))
            throw InvalidArgument("cartan_integer: " + coeffs_label(lambda) + " is not in Δ ∪ {0}");
        Rational v = 2 * inner(lambda, alpha) / inner(alpha, alpha);
        if (v.get_den() != 1) throw ConsistencyError("cartan-integrality", "non-integral Cartan number");
        return int(v.get_num().get_si());
    }

    /// s_α(λ) = λ − A_{α,λ} α.
    RootVector weyl_reflect(const Coeffs& alpha, const Coeffs& lambda) const {
        if (!is_root(lambda)) throw InvalidArgument("weyl_reflect: " + coeffs_label(lambda) + " is not a root");
        int a = cartan_integer(alpha, lambda);
        return make(lambda - a * alpha);
    }

    /// α-string through λ, ordered from λ − pα to λ + qα (members of Δ ∪ {0}).
    std::vector<RootVector> alpha_string(const Coeffs& alpha, const Coeffs& lambda) const {
        if (!is_root(alpha)) throw InvalidArgument("alpha_string: " + coeffs_label(alpha) + " is not a root");
        if (!is_root_or_zero(lambda))
            throw InvalidArgument("alpha_string: " + coeffs_label(lambda) + " is not in Δ ∪ {0}");
        Coeffs lo = lambda;
        while (is_root_or_zero(lo - alpha)) lo = lo - alpha;
        std::vector<RootVector> out;
        for (Coeffs c = lo; is_root_or_zero(c); c = c + alpha) out.push_back(make(c));
        return out;
    }

    /// The (α₀,α₁)-class of λ as described by the structure lemma.
    StringClass pair_string_class(int a0, int a1, const Coeffs& lambda) const;

    /// Partition of Δ⁺ into classes modulo the lattice spanned by `generators`.
    std::vector<std::vector<int>> lattice_classes(const std::vector<Coeffs>& generators) const;

    Coeffs simple(int i) const { return simple_roots.at(i).coeffs; }

    std::map<Coeffs, int> index_;  ///< positive root -> position in positive_roots
};

namespace detail {

using EpsVec = std::vector<Rational>;

inline EpsVec eps(int dim, std::initializer_list<std::pair<int, int>> terms) {
    EpsVec v(dim, 0);
    for (auto [i, c] : terms) v[i] += c;
    return v;
}

struct EpsTable {
    int dim;
    std::vector<EpsVec> simple;
    std::vector<EpsVec> roots;  ///< all of Δ
};

inline EpsTable eps_table(Family f, int r) {
    EpsTable t;
    auto pm = [&](const EpsVec& v) {
        t.roots.push_back(v);
        t.roots.push_back(scale(Rational(-1), v));
    };
    switch (f) {
        case Family::A:
            t.dim = r + 1;
            for (int i = 0; i < r; ++i) t.simple.push_back(eps(t.dim, {{i, 1}, {i + 1, -1}}));
            for (int i = 0; i < t.dim; ++i)
                for (int j = i + 1; j < t.dim; ++j) pm(eps(t.dim, {{i, 1}, {j, -1}}));
            break;
        case Family::B:
        case Family::C:
        case Family::BC:
        case Family::D:
            t.dim = r;
            for (int i = 0; i + 1 < r; ++i) t.simple.push_back(eps(t.dim, {{i, 1}, {i + 1, -1}}));
            if (f == Family::C) t.simple.push_back(eps(t.dim, {{r - 1, 2}}));
            else if (f == Family::D) t.simple.push_back(eps(t.dim, {{r - 2, 1}, {r - 1, 1}}));
            else t.simple.push_back(eps(t.dim, {{r - 1, 1}}));
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    pm(eps(t.dim, {{i, 1}, {j, -1}}));
                    pm(eps(t.dim, {{i, 1}, {j, 1}}));
                }
            for (int i = 0; i < r; ++i) {
                if (f == Family::B || f == Family::BC) pm(eps(t.dim, {{i, 1}}));
                if (f == Family::C || f == Family::BC) pm(eps(t.dim, {{i, 2}}));
            }
            break;
        case Family::G2:
            // α₀ long, α₁ short, inside the plane x+y+z = 0
            t.dim = 3;
            t.simple.push_back(eps(3, {{0, -2}, {1, 1}, {2, 1}}));
            t.simple.push_back(eps(3, {{0, 1}, {1, -1}}));
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) pm(eps(3, {{i, 1}, {j, -1}}));
            for (int i = 0; i < 3; ++i) {
                EpsVec v(3, -1);
                v[i] = 2;
                pm(v);
            }
            break;
    }
    return t;
}

}  // namespace detail

/// multiplicity_profile: per length class in increasing length order (empty: all 1).
inline AbstractRootSystem build_root_system(Family family, int rank,
                                            const std::vector<int>& multiplicity_profile = {}) {
    bool ok = rank >= 1;
    if (family == Family::D) ok = rank >= 3;
    if (family == Family::G2) ok = rank == 2;
    if (!ok)
        throw InvalidArgument("build_root_system: invalid (family, rank) pair (" + to_string(family) + ", " +
                              std::to_string(rank) + ")");
    auto t = detail::eps_table(family, rank);
    AbstractRootSystem s;
    s.family = family;
    s.rank = rank;

    Matrix<Rational> g(rank, rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = dot(t.simple[i], t.simple[j]);
    Rational shortest = g(0, 0);
    for (int i = 0; i < rank; ++i) shortest = std::min(shortest, Rational(g(i, i)));
    s.inner_product = (Rational(2) / shortest) * g;

    // express every root of the table over the simple roots
    auto simple_cols = Matrix<Rational>::from_columns(t.simple, t.dim);
    std::set<Coeffs> pos;
    for (const auto& r : t.roots) {
        auto c = solve(simple_cols, r);
        if (!c) throw ConsistencyError("root-table", "root outside the span of the simple roots");
        Coeffs ci(rank);
        bool nonneg = true, nonpos = true;
        for (int i = 0; i < rank; ++i) {
            if ((*c)[i].get_den() != 1) throw ConsistencyError("root-table", "non-integral simple coordinates");
            ci[i] = int((*c)[i].get_num().get_si());
            nonneg &= ci[i] >= 0;
            nonpos &= ci[i] <= 0;
        }
        if (!nonneg && !nonpos) throw ConsistencyError("positivity-dichotomy", "mixed-sign root " + coeffs_label(ci));
        if (nonneg) pos.insert(ci);
    }
    std::vector<Coeffs> sorted(pos.begin(), pos.end());
    std::sort(sorted.begin(), sorted.end(), [](const Coeffs& a, const Coeffs& b) {
        int la = 0, lb = 0;
        for (int x : a) la += x;
        for (int x : b) lb += x;
        if (la != lb) return la < lb;
        return a > b;
    });
    for (const auto& c : sorted) {
        s.index_[c] = int(s.positive_roots.size());
        s.positive_roots.push_back(s.make(c));
    }
    for (int i = 0; i < rank; ++i) s.simple_roots.push_back(s.make(unit<int>(rank, i)));

    s.cartan_matrix = Matrix<int>(rank, rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) s.cartan_matrix(i, j) = s.cartan_integer(s.simple(i), s.simple(j));
    for (int i = 0; i < rank; ++i)
        if (!s.positive_index(2 * s.simple(i))) s.reduced_simple.push_back(i);

    std::vector<Rational> lengths;
    for (const auto& r : s.positive_roots)
        if (std::find(lengths.begin(), lengths.end(), r.length_sq) == lengths.end()) lengths.push_back(r.length_sq);
    std::sort(lengths.begin(), lengths.end());
    if (!multiplicity_profile.empty() && multiplicity_profile.size() != lengths.size())
        throw InvalidArgument("build_root_system: multiplicity profile needs " + std::to_string(lengths.size()) +
                              " entries");
    for (const auto& r : s.positive_roots) {
        int m = 1;
        if (!multiplicity_profile.empty()) {
            auto k = std::find(lengths.begin(), lengths.end(), r.length_sq) - lengths.begin();
            m = multiplicity_profile[k];
            if (m < 1) throw InvalidArgument("build_root_system: multiplicities must be positive");
        }
        s.multiplicities.push_back(m);
    }
    return s;
}

inline std::vector<std::vector<int>> AbstractRootSystem::lattice_classes(const std::vector<Coeffs>& gens) const {
    // λ ~ μ iff λ − μ lies in the integer span of gens; the simple-coordinate lattice makes
    // rational-span membership equivalent for the generator sets used here (subsets of Δ).
    std::vector<Vec<Rational>> g;
    for (const auto& c : gens) {
        Vec<Rational> v(rank);
        for (int i = 0; i < rank; ++i) v[i] = c[i];
        g.push_back(v);
    }
    g = independent_subset(g);
    std::vector<int> cls(positive_roots.size(), -1);
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < positive_roots.size(); ++i) {
        if (cls[i] >= 0) continue;
        cls[i] = int(out.size());
        out.push_back({int(i)});
        for (std::size_t j = i + 1; j < positive_roots.size(); ++j) {
            if (cls[j] >= 0) continue;
            Coeffs d = positive_roots[j].coeffs - positive_roots[i].coeffs;
            Vec<Rational> dv(rank);
            for (int k = 0; k < rank; ++k) dv[k] = d[k];
            if (in_span(g, dv)) {
                cls[j] = cls[i];
                out.back().push_back(int(j));
            }
        }
    }
    return out;
}

inline StringClass AbstractRootSystem::pair_string_class(int a0, int a1, const Coeffs& lambda) const {
    if (a0 < 0 || a1 < 0 || a0 >= rank || a1 >= rank || a0 == a1)
        throw InvalidArgument("pair_string_class: need two distinct simple roots");
    Coeffs s0 = simple(a0), s1 = simple(a1);
    if (cartan_integer(s0, s1) != -1 || cartan_integer(s1, s0) != -1)
        throw InvalidArgument("pair_string_class: simple roots must satisfy A_{α0,α1} = A_{α1,α0} = -1");
    if (!positive_index(lambda)) throw InvalidArgument("pair_string_class: λ is not a positive root");
    bool in_plane = true;
    for (int i = 0; i < rank; ++i)
        if (i != a0 && i != a1 && lambda[i] != 0) in_plane = false;
    if (in_plane) throw InvalidArgument("pair_string_class: λ lies in Rα0 ⊕ Rα1");

    std::vector<Coeffs> members;
    for (int n = -4; n <= 4; ++n)
        for (int m = -4; m <= 4; ++m) {
            Coeffs c = lambda + n * s0 + m * s1;
            if (positive_index(c)) members.push_back(c);
        }
    int lv = level(lambda);
    for (const auto& c : members)
        if (level(c) < lv)
            throw InvalidArgument("pair_string_class: " + coeffs_label(lambda) +
                                  " is not of minimum level in its class (" + coeffs_label(c) + " is lower)");

    StringClass sc;
    sc.representative = make(lambda);
    bool p0 = positive_index(lambda + s0).has_value(), p1 = positive_index(lambda + s1).has_value();
    std::vector<Coeffs> expected;
    if (!p0 && !p1) {
        sc.shape = ClassShape::singleton;
        expected = {lambda};
    } else {
        if (p0 && p1) throw ConsistencyError("structure-lemma", "both λ+α0 and λ+α1 are roots");
        Coeffs ak = p0 ? s0 : s1, ak1 = p0 ? s1 : s0;
        if (positive_index(lambda + 2 * ak)) {
            sc.shape = ClassShape::len6;
            expected = {lambda,          lambda + ak,          lambda + ak + ak1,
                        lambda + 2 * ak, lambda + 2 * ak + ak1, lambda + 2 * ak + 2 * ak1};
        } else {
            sc.shape = ClassShape::len3;
            expected = {lambda, lambda + ak, lambda + ak + ak1};
        }
    }
    std::set<Coeffs> a(members.begin(), members.end()), b(expected.begin(), expected.end());
    if (a != b)
        throw ConsistencyError("structure-lemma", "class of " + coeffs_label(lambda) +
                                                      " does not match the lemma's description");
    for (const auto& c : expected) sc.members.push_back(make(c));
    return sc;
}

}  // namespace cpc
