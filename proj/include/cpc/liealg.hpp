#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpc/linalg.hpp"
#include "cpc/rootsys.hpp"

namespace cpc {

/// One structure constant [e_i, e_j] ∋ c e_k, kept in both exact and double form.
struct Term {
    int k;
    Rational c;
    double d;
};

template <class T>
inline T term_coef(const Term& t);
template <>
inline Rational term_coef<Rational>(const Term& t) { return t.c; }
template <>
inline double term_coef<double>(const Term& t) { return t.d; }

/// Sparse N×N rational matrix, used only while building an algebra from a matrix realization.
using SparseMat = std::map<std::pair<int, int>, Rational>;

/// Real Lie algebra with exact structure constants, Cartan involution and Killing form.
struct LieAlgebra {
    std::string name;
    int dim = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<Term>> table;  ///< table[i*dim+j] = [e_i, e_j]
    Matrix<Rational> theta;                ///< column j = θ(e_j)
    Matrix<Rational> killing;              ///< B(e_i, e_j)
    Matrix<Rational> b_theta;              ///< −B(e_i, θ e_j)

    // realization data
    int matrix_size = 0;
    std::vector<SparseMat> matrices;
    Vec<Rational> h_reg;                   ///< coordinates of the regular element
    Family expected_family = Family::A;
    int expected_rank = 1;

    const std::vector<Term>& br(int i, int j) const { return table[std::size_t(i) * dim + j]; }

    template <class T>
    Vec<T> bracket(const Vec<T>& x, const Vec<T>& y) const {
        Vec<T> out(dim, T(0));
        for (int i = 0; i < dim; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < dim; ++j) {
                if (y[j] == 0) continue;
                const auto& ts = br(i, j);
                if (ts.empty()) continue;
                T xy = x[i] * y[j];
                for (const auto& t : ts) out[t.k] += xy * term_coef<T>(t);
            }
        }
        return out;
    }

    template <class T>
    Vec<T> apply_theta(const Vec<T>& x) const {
        Vec<T> out(dim, T(0));
        for (int j = 0; j < dim; ++j) {
            if (x[j] == 0) continue;
            for (int i = 0; i < dim; ++i)
                if (theta(i, j) != 0) out[i] += T(term_value<T>(theta(i, j))) * x[j];
        }
        return out;
    }

    /// Matrix of ad(x) (exact).
    Matrix<Rational> ad(const Vec<Rational>& x) const {
        Matrix<Rational> m(dim, dim);
        for (int j = 0; j < dim; ++j) {
            auto col = bracket(x, unit<Rational>(dim, j));
            for (int i = 0; i < dim; ++i) m(i, j) = col[i];
        }
        return m;
    }

    Rational killing_form(const Vec<Rational>& x, const Vec<Rational>& y) const { return bilinear(killing, x, y); }

    template <class T>
    static T term_value(const Rational& q) {
        if constexpr (std::is_same_v<T, double>) return q.get_d();
        else return q;
    }
};

namespace detail {

inline SparseMat sp_mul(const SparseMat& a, const SparseMat& b) {
    std::map<int, std::vector<std::pair<int, Rational>>> brow;
    for (const auto& [rc, v] : b) brow[rc.first].push_back({rc.second, v});
    SparseMat out;
    for (const auto& [rc, v] : a) {
        auto it = brow.find(rc.second);
        if (it == brow.end()) continue;
        for (const auto& [c, w] : it->second) out[{rc.first, c}] += v * w;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

inline SparseMat sp_sub(SparseMat a, const SparseMat& b) {
    for (const auto& [rc, v] : b) a[rc] -= v;
    for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
    return a;
}

inline SparseMat sp_neg_transpose(const SparseMat& a) {
    SparseMat out;
    for (const auto& [rc, v] : a) out[{rc.second, rc.first}] = -v;
    return out;
}

/// Coordinates of matrices in a fixed basis, through an invertible pivot submatrix.
class MatrixCoordinates {
public:
    MatrixCoordinates(const std::vector<SparseMat>& basis, int n) : basis_(basis), n_(n) {
        int d = int(basis.size());
        Matrix<Rational> rows(d, std::size_t(n) * n);
        for (int i = 0; i < d; ++i)
            for (const auto& [rc, v] : basis[i]) rows(i, std::size_t(rc.first) * n + rc.second) = v;
        Matrix<Rational> r = rows;
        pivots_ = rref(r);
        if (int(pivots_.size()) != d) throw ConsistencyError("basis-independence", "realization basis is dependent");
        Matrix<Rational> p(d, d);  // p(r, i) = basis_i at pivot r
        for (int r2 = 0; r2 < d; ++r2)
            for (int i = 0; i < d; ++i) p(r2, i) = rows(i, pivots_[r2]);
        pinv_ = inverse(p);
    }

    /// Exact coordinates; throws if x is outside the span.
    Vec<Rational> operator()(const SparseMat& x) const {
        int d = int(basis_.size());
        Vec<Rational> rhs(d, 0);
        for (int r = 0; r < d; ++r) {
            auto it = x.find({int(pivots_[r] / n_), int(pivots_[r] % n_)});
            if (it != x.end()) rhs[r] = it->second;
        }
        Vec<Rational> c = pinv_ * rhs;
        SparseMat rec;
        for (int i = 0; i < d; ++i)
            if (c[i] != 0)
                for (const auto& [rc, v] : basis_[i]) rec[rc] += c[i] * v;
        if (!sp_sub(rec, x).empty())
            throw ConsistencyError("closure", "matrix lies outside the span of the realization basis");
        return c;
    }

private:
    std::vector<SparseMat> basis_;
    int n_;
    std::vector<std::size_t> pivots_;
    Matrix<Rational> pinv_;
};

}  // namespace detail

/// Build the algebra spanned by real matrices; θ(X) = −Xᵀ.
inline LieAlgebra algebra_from_matrices(std::string name, int n, std::vector<SparseMat> basis,
                                        std::vector<std::string> labels, const SparseMat& h_reg, Family fam,
                                        int rank) {
    LieAlgebra g;
    g.name = std::move(name);
    g.dim = int(basis.size());
    g.labels = std::move(labels);
    g.matrix_size = n;
    g.expected_family = fam;
    g.expected_rank = rank;
    detail::MatrixCoordinates coords(basis, n);
    const int d = g.dim;
    g.table.assign(std::size_t(d) * d, {});
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            auto c = detail::sp_sub(detail::sp_mul(basis[i], basis[j]), detail::sp_mul(basis[j], basis[i]));
            if (c.empty()) continue;
            auto v = coords(c);
            for (int k = 0; k < d; ++k) {
                if (v[k] == 0) continue;
                g.table[std::size_t(i) * d + j].push_back({k, v[k], v[k].get_d()});
                g.table[std::size_t(j) * d + i].push_back({k, Rational(-v[k]), -v[k].get_d()});
            }
        }
    g.theta = Matrix<Rational>(d, d);
    for (int j = 0; j < d; ++j) {
        auto v = coords(detail::sp_neg_transpose(basis[j]));
        for (int i = 0; i < d; ++i) g.theta(i, j) = v[i];
    }
    g.h_reg = coords(h_reg);

    // Killing form B(a,b) = Σ_k Σ_m (ad a)_{mk} (ad b)_{km}
    g.killing = Matrix<Rational>(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            Rational s = 0;
            for (int k = 0; k < d; ++k)
                for (const auto& t1 : g.br(a, k))
                    for (const auto& t2 : g.br(b, t1.k))
                        if (t2.k == k) s += t1.c * t2.c;
            g.killing(a, b) = s;
            g.killing(b, a) = s;
        }
    g.b_theta = Matrix<Rational>(d, d);
    Matrix<Rational> bt = g.killing * g.theta;
    for (std::size_t i = 0; i < bt.data.size(); ++i) g.b_theta.data[i] = -bt.data[i];
    g.matrices = std::move(basis);
    return g;
}

namespace detail {

inline SparseMat elem(int r, int c, Rational v = 1) { return SparseMat{{{r, c}, v}}; }

inline SparseMat sp_add(SparseMat a, const SparseMat& b) {
    for (const auto& [rc, v] : b) a[rc] += v;
    for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
    return a;
}

/// Place a block x (b×b) at block position (i,j).
inline SparseMat embed_block(const SparseMat& x, int i, int j, int b) {
    SparseMat out;
    for (const auto& [rc, v] : x) out[{i * b + rc.first, j * b + rc.second}] = v;
    return out;
}

/// Diagonal matrix from rational entries, each repeated over a block of size b.
inline SparseMat block_diag(const std::vector<Rational>& d, int b) {
    SparseMat out;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0)
            for (int k = 0; k < b; ++k) out[{int(i) * b + k, int(i) * b + k}] = d[i];
    return out;
}

/// Traceless diagonal with consecutive gaps 1, 2, 4, ... (distinct values on all roots).
inline std::vector<Rational> sl_regular_diagonal(int n) {
    std::vector<Rational> d(n, 0);
    for (int i = n - 2; i >= 0; --i) d[i] = d[i + 1] + (1 << i);
    Rational mean = 0;
    for (auto& x : d) mean += x;
    mean /= n;
    for (auto& x : d) x -= mean;
    return d;
}

/// Real matrix of left multiplication by the unit e_u ∈ {1,i,j,k} (b = 4) or {1,i} (b = 2).
inline SparseMat unit_block(int u, int b) {
    if (b == 1) return elem(0, 0);
    if (b == 2) return u == 0 ? sp_add(elem(0, 0), elem(1, 1)) : sp_add(elem(1, 0), elem(0, 1, -1));
    // L_q for q = a + b i + c j + d k has rows
    // [a -b -c -d; b a -d c; c d a -b; d -c b a]
    static const int sgn[4][4][4] = {
        // u = 1
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
        // u = i
        {{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}},
        // u = j
        {{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}},
        // u = k
        {{0, 0, 0, -1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}},
    };
    SparseMat out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (sgn[u][r][c] != 0) out[{r, c}] = sgn[u][r][c];
    return out;
}

inline LieAlgebra build_sl(int n, int b) {
    if (n < 2) throw InvalidArgument("sl_n: need n >= 2");
    static const char* unit_names[4] = {"1", "i", "j", "k"};
    std::vector<SparseMat> basis;
    std::vector<std::string> labels;
    auto suffix = [&](int u) { return b == 1 ? std::string() : std::string(".") + unit_names[u]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (int u = 0; u < b; ++u) {
                basis.push_back(embed_block(unit_block(u, b), i, j, b));
                labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1) + suffix(u));
            }
        }
    for (int i = 0; i + 1 < n; ++i) {
        std::vector<Rational> d(n, 0);
        d[i] = 1;
        d[i + 1] = -1;
        basis.push_back(block_diag(d, b));
        labels.push_back("H" + std::to_string(i + 1));
    }
    for (int u = 1; u < b; ++u)
        for (int i = 0; i < n; ++i) {
            // imaginary diagonal entries; for b = 2 keep them traceless
            if (b == 2 && i == n - 1) continue;
            SparseMat m = embed_block(unit_block(u, b), i, i, b);
            if (b == 2) m = sp_sub(m, embed_block(unit_block(u, b), i + 1, i + 1, b));
            basis.push_back(m);
            labels.push_back(b == 2 ? "H" + std::to_string(i + 1) + ".i"
                                    : "E" + std::to_string(i + 1) + std::to_string(i + 1) + suffix(u));
        }
    std::string nm = b == 1 ? "sl_real" : b == 2 ? "sl_complex" : "sl_quaternion";
    return algebra_from_matrices(nm + "(" + std::to_string(n) + ")", n * b, std::move(basis), std::move(labels),
                                 block_diag(sl_regular_diagonal(n), b), Family::A, n - 1);
}

/// Basis of {X : Xᵀ J + J X = 0} from projections of elementary matrices, J orthogonal.
inline std::vector<SparseMat> form_algebra_basis(const SparseMat& j, const SparseMat& jinv, int n,
                                                 std::vector<std::string>& labels) {
    std::vector<SparseMat> out;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // P(E_ab) = E_ab − J⁻¹ E_ba J
            SparseMat p = sp_sub(elem(a, b), sp_mul(sp_mul(jinv, elem(b, a)), j));
            if (p.empty()) continue;
            // canonical sign: first entry positive
            if (p.begin()->second < 0)
                for (auto& [rc, v] : p) v = -v;
            bool dup = false;
            for (const auto& q : out) dup |= q == p;
            if (dup) continue;
            out.push_back(p);
            labels.push_back("P" + std::to_string(a + 1) + "_" + std::to_string(b + 1));
        }
    return out;
}

}  // namespace detail

inline LieAlgebra build_sl_real(int n) { return detail::build_sl(n, 1); }
inline LieAlgebra build_sl_complex(int n) { return detail::build_sl(n, 2); }
inline LieAlgebra build_sl_quaternion(int n) { return detail::build_sl(n, 4); }

/// so(p,q) realized as so(S), S pairing index i with N−1−i for i < p and the identity in between.
inline LieAlgebra build_so_pq(int p, int q) {
    if (p < 1 || q < p) throw InvalidArgument("so(p,q): need 1 <= p <= q");
    if (p == q && p < 3) throw InvalidArgument("so(p,p): need p >= 3");
    int n = p + q;
    SparseMat s;
    for (int i = 0; i < n; ++i) s[{i, (i < p || i >= q) ? n - 1 - i : i}] = 1;
    std::vector<std::string> labels;
    auto basis = detail::form_algebra_basis(s, s, n, labels);
    // h = (h_1..h_p, 0.., -h_p..-h_1) with gaps 1, 2, 4, .. and h_p = 2^(p+1)
    std::vector<Rational> h(p, 0);
    h[p - 1] = 1 << (p + 1);
    for (int i = p - 2; i >= 0; --i) h[i] = h[i + 1] + (1 << i);
    SparseMat hr;
    for (int i = 0; i < p; ++i) {
        hr[{i, i}] = h[i];
        hr[{n - 1 - i, n - 1 - i}] = -h[i];
    }
    return algebra_from_matrices("so_pq(" + std::to_string(p) + "," + std::to_string(q) + ")", n, std::move(basis),
                                 std::move(labels), hr, p == q ? Family::D : Family::B, p);
}

/// sp_2n(R) realized with Ω = [[0, A], [−A, 0]], A antidiagonal.
inline LieAlgebra build_sp_real(int n) {
    if (n < 2) throw InvalidArgument("sp_real: need n >= 2");
    int m = 2 * n;
    SparseMat om, ominv;
    for (int i = 0; i < m; ++i) {
        int s = i < n ? 1 : -1;
        om[{i, m - 1 - i}] = s;
        ominv[{m - 1 - i, i}] = s;  // Ω⁻¹ = Ωᵀ
    }
    std::vector<std::string> labels;
    auto basis = detail::form_algebra_basis(om, ominv, m, labels);
    std::vector<Rational> h(n, 0);
    h[n - 1] = 1 << (n + 1);
    for (int i = n - 2; i >= 0; --i) h[i] = h[i + 1] + (1 << i);
    SparseMat hr;
    for (int i = 0; i < n; ++i) {
        hr[{i, i}] = h[i];
        hr[{m - 1 - i, m - 1 - i}] = -h[i];
    }
    return algebra_from_matrices("sp_real(" + std::to_string(n) + ")", m, std::move(basis), std::move(labels), hr,
                                 Family::C, n);
}

// ---------------------------------------------------------------------------

enum class Component { a, k0, root };

/// Restricted root space decomposition g = k₀ ⊕ a ⊕ ⊕ g_λ over an adapted basis.
struct Decomposition {
    std::shared_ptr<const LieAlgebra> alg;
    AbstractRootSystem sys;
    int dim = 0;

    std::vector<int> a_idx, k0_idx;
    std::vector<std::vector<int>> pos_idx;  ///< per positive root of sys, basis indices of g_λ
    std::vector<std::vector<int>> neg_idx;  ///< same for g_{−λ}
    std::vector<Component> component;       ///< per basis index
    std::vector<int> root_of;               ///< signed (1+root index) per basis index, 0 on g₀
    std::vector<Vec<Rational>> functionals; ///< per positive root, values on a_idx
    std::vector<Vec<Rational>> h_lambda;    ///< per positive root, H_λ (full coordinates)
    Rational metric_scale;                  ///< c, inner product is c·B_θ
    Matrix<Rational> gram;                  ///< c·B_θ
    Matrix<Rational> gram_an;               ///< A N metric on a ⊕ n (zero elsewhere)
    Matrix<double> gram_d, gram_an_d;

    const LieAlgebra& g() const { return *alg; }

    template <class T>
    Vec<T> bracket(const Vec<T>& x, const Vec<T>& y) const { return alg->bracket(x, y); }
    template <class T>
    Vec<T> theta(const Vec<T>& x) const { return alg->apply_theta(x); }

    Rational inner(const Vec<Rational>& x, const Vec<Rational>& y) const { return bilinear(gram, x, y); }
    double inner(const Vec<double>& x, const Vec<double>& y) const { return bilinear(gram_d, x, y); }
    Rational metric_an(const Vec<Rational>& x, const Vec<Rational>& y) const { return bilinear(gram_an, x, y); }
    double metric_an(const Vec<double>& x, const Vec<double>& y) const { return bilinear(gram_an_d, x, y); }

    int num_positive() const { return int(sys.positive_roots.size()); }
    const Coeffs& root(int r) const { return sys.positive_roots.at(r).coeffs; }
    Rational length_sq(int r) const { return sys.positive_roots.at(r).length_sq; }
    int root_index(const Coeffs& c) const {
        auto i = sys.positive_index(c);
        if (!i) throw InvalidArgument("not a positive root: " + coeffs_label(c));
        return *i;
    }
    int simple_index(int i) const { return root_index(sys.simple(i)); }

    std::vector<Vec<Rational>> root_space(int r) const {
        std::vector<Vec<Rational>> out;
        for (int i : pos_idx.at(r)) out.push_back(unit<Rational>(dim, i));
        return out;
    }
    std::vector<Vec<Rational>> neg_root_space(int r) const {
        std::vector<Vec<Rational>> out;
        for (int i : neg_idx.at(r)) out.push_back(unit<Rational>(dim, i));
        return out;
    }
    std::vector<Vec<Rational>> basis_of(const std::vector<int>& idx) const {
        std::vector<Vec<Rational>> out;
        for (int i : idx) out.push_back(unit<Rational>(dim, i));
        return out;
    }

    bool in_an(int i) const { return component[i] == Component::a || root_of[i] > 0; }

    /// Support of a vector inside g_λ (positive root r)?
    template <class T>
    bool in_root_space(const Vec<T>& x, int r) const {
        for (int i = 0; i < dim; ++i)
            if (x[i] != 0 && root_of[i] != r + 1) return false;
        return true;
    }
};

/// Subspace tags accepted by project().
enum class SubspaceTag { a, n, an, root, k0, g0 };

inline SubspaceTag parse_subspace_tag(const std::string& s) {
    if (s == "a") return SubspaceTag::a;
    if (s == "n") return SubspaceTag::n;
    if (s == "a+n" || s == "a⊕n") return SubspaceTag::an;
    if (s == "g_lambda" || s == "root") return SubspaceTag::root;
    if (s == "k0" || s == "k₀") return SubspaceTag::k0;
    if (s == "g0") return SubspaceTag::g0;
    throw InvalidArgument("unknown subspace tag '" + s + "'");
}

/// Coordinate projection onto a subspace of the adapted basis (root: positive root index r).
template <class T>
Vec<T> project(const Decomposition& d, const Vec<T>& x, SubspaceTag tag, int r = -1) {
    Vec<T> out(d.dim, T(0));
    for (int i = 0; i < d.dim; ++i) {
        bool keep = false;
        switch (tag) {
            case SubspaceTag::a: keep = d.component[i] == Component::a; break;
            case SubspaceTag::n: keep = d.root_of[i] > 0; break;
            case SubspaceTag::an: keep = d.in_an(i); break;
            case SubspaceTag::root:
                if (r < 0) throw InvalidArgument("project: root tag needs a root index");
                keep = d.root_of[i] == r + 1;
                break;
            case SubspaceTag::k0: keep = d.component[i] == Component::k0; break;
            case SubspaceTag::g0: keep = d.root_of[i] == 0; break;
        }
        if (keep) out[i] = x[i];
    }
    return out;
}

inline Decomposition restricted_decomposition(std::shared_ptr<const LieAlgebra> alg) {
    const LieAlgebra& g = *alg;
    Decomposition D;
    D.alg = alg;
    D.dim = g.dim;
    const int d = g.dim;

    Matrix<Rational> adh = g.ad(g.h_reg);
    std::vector<Rational> eig;
    for (int i = 0; i < d; ++i)
        if (std::find(eig.begin(), eig.end(), adh(i, i)) == eig.end()) eig.push_back(adh(i, i));
    std::sort(eig.begin(), eig.end());
    std::map<Rational, std::vector<Vec<Rational>>> spaces;
    std::size_t total = 0;
    for (const auto& mu : eig) {
        Matrix<Rational> m = adh;
        for (int i = 0; i < d; ++i) m(i, i) -= mu;
        auto k = kernel(m);
        total += k.size();
        spaces[mu] = k;
    }
    if (int(total) != d)
        throw ConsistencyError("decomposition-dimension",
                               "eigenspaces of ad(H_reg) span " + std::to_string(total) + " of " + std::to_string(d));

    // adapted basis: every eigenspace must be spanned by basis vectors
    D.root_of.assign(d, 0);
    D.component.assign(d, Component::root);
    std::map<Rational, std::vector<int>> idx_of;
    for (const auto& [mu, vs] : spaces) {
        for (const auto& v : vs) {
            int nz = 0, at = -1;
            for (int i = 0; i < d; ++i)
                if (v[i] != 0) ++nz, at = i;
            if (nz != 1) throw ConsistencyError("adapted-basis", "root space not spanned by basis vectors");
            idx_of[mu].push_back(at);
        }
    }
    // g₀ = k₀ ⊕ a, split by θ
    for (int i : idx_of[Rational(0)]) {
        auto e = unit<Rational>(d, i);
        auto t = g.apply_theta(e);
        if (t == e) {
            D.k0_idx.push_back(i);
            D.component[i] = Component::k0;
        } else if (t == scale(Rational(-1), e)) {
            D.a_idx.push_back(i);
            D.component[i] = Component::a;
        } else {
            throw ConsistencyError("adapted-basis", "g0 basis vector " + g.labels[i] + " is not θ-homogeneous");
        }
    }
    if (int(D.a_idx.size()) != g.expected_rank)
        throw ConsistencyError("split-rank", "dim a = " + std::to_string(D.a_idx.size()));
    for (int i : D.a_idx)
        for (int j : D.a_idx)
            if (!is_zero(g.bracket(unit<Rational>(d, i), unit<Rational>(d, j))))
                throw ConsistencyError("a-abelian", "a is not abelian");
    if (!in_span(D.basis_of(D.a_idx), g.h_reg)) throw ConsistencyError("h-reg", "H_reg not in a");

    // root functionals
    struct Raw {
        Rational mu;
        Vec<Rational> f;
        std::vector<int> idx;
    };
    std::vector<Raw> pos, neg;
    for (const auto& [mu, idx] : idx_of) {
        if (mu == 0) continue;
        Vec<Rational> f;
        for (int h : D.a_idx) {
            auto y = g.bracket(unit<Rational>(d, h), unit<Rational>(d, idx[0]));
            f.push_back(y[idx[0]]);
        }
        for (int i : idx)
            for (std::size_t k = 0; k < D.a_idx.size(); ++k) {
                auto y = g.bracket(unit<Rational>(d, D.a_idx[k]), unit<Rational>(d, i));
                if (y != scale(f[k], unit<Rational>(d, i)))
                    throw ConsistencyError("weight-vectors", "basis vector " + g.labels[i] + " is not an a-weight vector");
            }
        (mu > 0 ? pos : neg).push_back({mu, f, idx});
    }
    // simple roots: positive, not a sum of two positive roots; ordered by value on H_reg
    std::vector<int> simple;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        bool decomposable = false;
        for (std::size_t a = 0; a < pos.size() && !decomposable; ++a)
            for (std::size_t b = 0; b < pos.size() && !decomposable; ++b)
                decomposable = add(pos[a].f, pos[b].f) == pos[i].f;
        if (!decomposable) simple.push_back(int(i));
    }
    std::sort(simple.begin(), simple.end(), [&](int x, int y) { return pos[x].mu < pos[y].mu; });
    const int rk = int(D.a_idx.size());
    if (int(simple.size()) != rk) throw ConsistencyError("simple-roots", "wrong number of simple roots");
    std::vector<Vec<Rational>> sf;
    for (int s : simple) sf.push_back(pos[s].f);
    Matrix<Rational> scols = Matrix<Rational>::from_columns(sf, rk);

    // B_θ on a and the metric scale
    Matrix<Rational> ga(rk, rk);
    for (int i = 0; i < rk; ++i)
        for (int j = 0; j < rk; ++j) ga(i, j) = g.b_theta(D.a_idx[i], D.a_idx[j]);
    Matrix<Rational> gainv = inverse(ga);
    auto len_unscaled = [&](const Vec<Rational>& f) { return dot(f, gainv * f); };
    Rational shortest = len_unscaled(sf[0]);
    for (const auto& f : sf) shortest = std::min(shortest, len_unscaled(f));
    D.metric_scale = shortest / 2;

    // abstract system with the realized multiplicities
    std::map<Coeffs, std::pair<Raw*, Raw*>> by_coeffs;
    for (auto& r : pos) {
        auto c = solve(scols, r.f);
        if (!c) throw ConsistencyError("root-coordinates", "root outside span of simple roots");
        Coeffs ci;
        for (auto& x : *c) {
            if (x.get_den() != 1 || x < 0) throw ConsistencyError("root-coordinates", "non-integral coordinates");
            ci.push_back(int(x.get_num().get_si()));
        }
        by_coeffs[ci].first = &r;
    }
    for (auto& r : neg) {
        Vec<Rational> mf = scale(Rational(-1), r.f);
        auto c = solve(scols, mf);
        if (!c) throw ConsistencyError("root-coordinates", "root outside span of simple roots");
        Coeffs ci;
        for (auto& x : *c) ci.push_back(int(x.get_num().get_si()));
        by_coeffs[ci].second = &r;
    }
    AbstractRootSystem base = build_root_system(g.expected_family, rk);
    if (base.positive_roots.size() != pos.size() || by_coeffs.size() != pos.size())
        throw ConsistencyError("root-system", "realized Δ⁺ has " + std::to_string(pos.size()) + " roots, expected " +
                                                  std::to_string(base.positive_roots.size()));
    for (int i = 0; i < rk; ++i)
        for (int j = 0; j < rk; ++j) {
            Rational aij = 2 * dot(sf[j], gainv * sf[i]) / len_unscaled(sf[i]);
            if (aij != base.cartan_matrix(i, j))
                throw ConsistencyError("cartan-matrix", "realized Cartan matrix differs from type " +
                                                            to_string(g.expected_family));
        }
    D.sys = base;
    D.pos_idx.resize(base.positive_roots.size());
    D.neg_idx.resize(base.positive_roots.size());
    D.functionals.resize(base.positive_roots.size());
    D.h_lambda.resize(base.positive_roots.size());
    for (std::size_t r = 0; r < base.positive_roots.size(); ++r) {
        auto it = by_coeffs.find(base.positive_roots[r].coeffs);
        if (it == by_coeffs.end() || !it->second.first || !it->second.second)
            throw ConsistencyError("root-system", "missing root space for " + coeffs_label(base.positive_roots[r].coeffs));
        D.pos_idx[r] = it->second.first->idx;
        D.neg_idx[r] = it->second.second->idx;
        D.sys.multiplicities[r] = int(D.pos_idx[r].size());
        if (D.pos_idx[r].size() != D.neg_idx[r].size())
            throw ConsistencyError("multiplicity", "dim g_λ != dim g_-λ");
        for (int i : D.pos_idx[r]) D.root_of[i] = int(r) + 1;
        for (int i : D.neg_idx[r]) D.root_of[i] = -(int(r) + 1);
        D.functionals[r] = it->second.first->f;
        // H_λ with c·B_θ(H, H_λ) = λ(H)
        Vec<Rational> h = scale(Rational(1 / D.metric_scale), gainv * D.functionals[r]);
        D.h_lambda[r] = zeros<Rational>(d);
        for (int k = 0; k < rk; ++k) D.h_lambda[r][D.a_idx[k]] = h[k];
        Rational l2 = dot(D.functionals[r], h);
        if (l2 != D.sys.positive_roots[r].length_sq)
            throw ConsistencyError("root-length", "realized |λ|² differs from the abstract system");
    }

    D.gram = D.metric_scale * g.b_theta;
    D.gram_an = Matrix<Rational>(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (!D.in_an(i) || !D.in_an(j)) continue;
            D.gram_an(i, j) = D.component[i] == Component::a ? D.gram(i, j) : Rational(D.gram(i, j) / 2);
        }
    D.gram_d = to_double(D.gram);
    D.gram_an_d = to_double(D.gram_an);
    return D;
}

inline Decomposition restricted_decomposition(LieAlgebra alg) {
    return restricted_decomposition(std::make_shared<const LieAlgebra>(std::move(alg)));
}

/// H_λ for a positive or negative root given by simple coordinates.
inline Vec<Rational> root_vector(const Decomposition& d, const Coeffs& c) {
    bool neg = std::all_of(c.begin(), c.end(), [](int x) { return x <= 0; });
    Coeffs p = neg ? -1 * c : c;
    auto r = d.sys.positive_index(p);
    if (!r) throw InvalidArgument("root_vector: " + coeffs_label(c) + " is not a root");
    return neg ? scale(Rational(-1), d.h_lambda[*r]) : d.h_lambda[*r];
}

/// Gram-Schmidt in the A N metric (floating point). Inputs must lie in a ⊕ n.
inline std::vector<Vec<double>> orthonormalize_an(const Decomposition& d, const std::vector<Vec<Rational>>& vs) {
    std::vector<Vec<double>> dv;
    for (const auto& v : vs) {
        for (int i = 0; i < d.dim; ++i)
            if (v[i] != 0 && !d.in_an(i)) throw InvalidArgument("orthonormalize_an: vector outside a ⊕ n");
        dv.push_back(to_double(v));
    }
    return orthonormalize(dv, [&](const Vec<double>& x, const Vec<double>& y) { return d.metric_an(x, y); }, 1e-10);
}

/// Canonical realized algebras by name.
inline LieAlgebra build_space(const std::string& family, int n, int q = 0) {
    if (family == "sl_real") return build_sl_real(n);
    if (family == "sl_complex") return build_sl_complex(n);
    if (family == "sl_quaternion") return build_sl_quaternion(n);
    if (family == "sp_real") return build_sp_real(n);
    if (family == "so_pq") return build_so_pq(n, q);
    throw InvalidArgument("unknown space family '" + family + "'");
}

}  // namespace cpc
