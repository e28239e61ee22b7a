#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cpc/liealg.hpp"

namespace cpc {

/// ∇_X Y on A N: 4⟨∇_X Y, Z⟩_AN = ⟨[X,Y] + (1−θ)[θX,Y], Z⟩_{Bθ}.
template <class T>
Vec<T> levi_civita(const Decomposition& d, const Vec<T>& x, const Vec<T>& y) {
    Vec<T> u = d.bracket(x, y);
    Vec<T> w = d.bracket(d.theta(x), y);
    Vec<T> tw = d.theta(w);
    Vec<T> out(d.dim, T(0));
    for (int i = 0; i < d.dim; ++i) {
        if (d.component[i] == Component::a) out[i] = (u[i] + w[i] - tw[i]) / T(4);
        else if (d.root_of[i] > 0) out[i] = (u[i] + w[i] - tw[i]) / T(2);
    }
    return out;
}

// ---- φ-maps ----------------------------------------------------------------

/// Root index of a nonzero vector lying in a single positive root space, else nullopt.
template <class T>
std::optional<int> root_of_vector(const Decomposition& d, const Vec<T>& x) {
    std::optional<int> r;
    for (int i = 0; i < d.dim; ++i) {
        if (x[i] == 0) continue;
        if (d.root_of[i] <= 0) return std::nullopt;
        if (r && *r != d.root_of[i] - 1) return std::nullopt;
        r = d.root_of[i] - 1;
    }
    return r;
}

/// Constant |ν|⁻¹(−A_{ν,γ})^{−1/2} for the ν-string through root λ; γ = its bottom.
inline double phi_constant(const Decomposition& d, int nu, int lambda) {
    const auto& sys = d.sys;
    const Coeffs& cn = d.root(nu);
    Coeffs bottom = sys.alpha_string(cn, d.root(lambda)).front().coeffs;
    if (!sys.positive_index(bottom))
        throw InvalidArgument("phi: the ν-string through " + coeffs_label(d.root(lambda)) + " leaves Δ⁺");
    // non-proportional
    Vec<Rational> a(cn.begin(), cn.end()), b(bottom.begin(), bottom.end());
    if (rank({a, b}) < 2) throw InvalidArgument("phi: ν proportional to γ");
    int A = sys.cartan_integer(cn, bottom);
    if (A >= 0) throw InvalidArgument("phi: trivial string (A_{ν,γ} = " + std::to_string(A) + ")");
    return 1.0 / (std::sqrt(d.length_sq(nu).get_d()) * std::sqrt(double(-A)));
}

/// φ_ξ(X) = |ν|⁻¹(−A_{ν,γ})^{−1/2}[ξ, X], ξ ∈ g_ν, X in a single root space of the string.
inline Vec<double> phi_apply(const Decomposition& d, const Vec<double>& xi, const Vec<double>& x) {
    auto nu = root_of_vector(d, xi), lam = root_of_vector(d, x);
    if (!nu || !lam) throw InvalidArgument("phi: arguments must lie in positive root spaces");
    return scale(phi_constant(d, *nu, *lam), d.bracket(xi, x));
}

/// φ_{θξ}(Y) = −|ν|⁻¹(−A_{ν,γ})^{−1/2}[θξ, Y].
inline Vec<double> phi_theta_apply(const Decomposition& d, const Vec<double>& xi, const Vec<double>& y) {
    auto nu = root_of_vector(d, xi), lam = root_of_vector(d, y);
    if (!nu || !lam) throw InvalidArgument("phi: arguments must lie in positive root spaces");
    return scale(-phi_constant(d, *nu, *lam), d.bracket(d.theta(xi), y));
}

struct PhiMap {
    int gamma, target;
    std::vector<Vec<double>> domain, codomain;  ///< orthonormal bases of g_γ, g_{γ+ν}
    Matrix<double> matrix;                       ///< codomain × domain
};

/// Matrix of φ_ξ: g_γ → g_{γ+ν}; γ must be the bottom of a nontrivial ν-string.
inline PhiMap phi_map(const Decomposition& d, const Vec<double>& xi, int gamma) {
    auto nu = root_of_vector(d, xi);
    if (!nu) throw InvalidArgument("phi_map: ξ must lie in a positive root space");
    if (std::abs(d.metric_an(xi, xi) - 1) > 1e-10) throw InvalidArgument("phi_map: ξ is not a unit vector");
    const auto& sys = d.sys;
    if (sys.is_root_or_zero(d.root(gamma) - d.root(*nu)))
        throw InvalidArgument("phi_map: γ is not the bottom of its ν-string");
    auto t = sys.positive_index(d.root(gamma) + d.root(*nu));
    if (!t) throw InvalidArgument("phi_map: trivial string (γ+ν not a root)");
    PhiMap p;
    p.gamma = gamma;
    p.target = *t;
    p.domain = orthonormalize_an(d, d.root_space(gamma));
    p.codomain = orthonormalize_an(d, d.root_space(*t));
    p.matrix = Matrix<double>(p.codomain.size(), p.domain.size());
    for (std::size_t j = 0; j < p.domain.size(); ++j) {
        auto y = phi_apply(d, xi, p.domain[j]);
        for (std::size_t i = 0; i < p.codomain.size(); ++i) p.matrix(i, j) = d.metric_an(y, p.codomain[i]);
    }
    return p;
}

// ---- orbits ----------------------------------------------------------------

struct VEntry {
    int root;                           ///< positive root index
    std::vector<Vec<Rational>> basis;   ///< spans V_root ⊆ g_root
};

struct VSpec {
    std::vector<VEntry> entries;
    std::string case_tag = "custom";
};

/// One class of the string partition of n ⊖ V, with its tangent columns.
struct PartitionBlock {
    std::vector<int> roots;
    std::string shape;                  ///< singleton, len3, len6, plane (roots inside the V lattice) or other
    std::optional<StringClass> cls;
    std::vector<int> columns;           ///< indices into tangent basis
};

struct OrbitModel {
    std::shared_ptr<const Decomposition> decomp;
    VSpec v;
    std::vector<Vec<Rational>> prebasis;    ///< exact basis of s
    std::vector<int> prebasis_root;         ///< -1 for a
    std::vector<Vec<Rational>> v_basis;     ///< exact basis of V
    std::vector<Vec<double>> tangent;
    std::vector<int> tangent_root;          ///< -1 for a
    std::vector<Vec<double>> normal;
    std::vector<int> normal_root;
    std::vector<int> a_columns;
    std::vector<PartitionBlock> partition;

    const Decomposition& d() const { return *decomp; }
    int dim_s() const { return int(tangent.size()); }
    int dim_v() const { return int(normal.size()); }

    Vec<double> normal_vector(const Vec<double>& coords) const {
        if (int(coords.size()) != dim_v()) throw InvalidArgument("normal direction has wrong length");
        Vec<double> xi = zeros<double>(d().dim);
        for (int k = 0; k < dim_v(); ++k) axpy(coords[k], normal[k], xi);
        return xi;
    }

    /// Exact V_root basis or empty.
    std::vector<Vec<Rational>> v_of(int root) const {
        for (const auto& e : v.entries)
            if (e.root == root) return e.basis;
        return {};
    }
};

inline std::string describe_bracket(const Decomposition& d, const Vec<Rational>& x) {
    std::string s;
    for (int i = 0; i < d.dim; ++i)
        if (x[i] != 0) s += (s.empty() ? "" : " + ") + x[i].get_str() + "*" + d.g().labels[i];
    return s.empty() ? "0" : s;
}

inline OrbitModel build_orbit(std::shared_ptr<const Decomposition> dp, VSpec spec) {
    const Decomposition& d = *dp;
    OrbitModel o;
    o.decomp = dp;
    std::vector<bool> seen(d.num_positive(), false);
    for (auto& e : spec.entries) {
        if (e.root < 0 || e.root >= d.num_positive()) throw InvalidArgument("VSpec: root index out of range");
        if (seen[e.root]) throw InvalidArgument("VSpec: root " + coeffs_label(d.root(e.root)) + " appears twice");
        seen[e.root] = true;
        if (e.basis.empty()) throw InvalidArgument("VSpec: V_α must be nonzero");
        for (const auto& x : e.basis) {
            if (int(x.size()) != d.dim) throw InvalidArgument("VSpec: vector has wrong dimension");
            if (is_zero(x) || !d.in_root_space(x, e.root))
                throw InvalidArgument("VSpec: vector outside g_" + coeffs_label(d.root(e.root)));
        }
        if (rank(e.basis) != e.basis.size()) throw InvalidArgument("VSpec: dependent basis for V_" + coeffs_label(d.root(e.root)));
    }
    o.v = std::move(spec);

    for (int i : d.a_idx) {
        o.prebasis.push_back(unit<Rational>(d.dim, i));
        o.prebasis_root.push_back(-1);
    }
    for (int r = 0; r < d.num_positive(); ++r) {
        auto comp = orthogonal_complement(d.root_space(r), o.v_of(r), d.gram);
        for (auto& x : comp) {
            o.prebasis.push_back(std::move(x));
            o.prebasis_root.push_back(r);
        }
    }
    for (const auto& e : o.v.entries)
        for (const auto& x : e.basis) o.v_basis.push_back(x);

    // exact closure [s, s] ⊆ s, i.e. ⊥ V inside a ⊕ n
    std::vector<bool> in_v(d.num_positive(), false);
    for (const auto& e : o.v.entries) in_v[e.root] = true;
    for (std::size_t i = 0; i < o.prebasis.size(); ++i)
        for (std::size_t j = i + 1; j < o.prebasis.size(); ++j) {
            int ri = o.prebasis_root[i], rj = o.prebasis_root[j];
            std::optional<int> target;
            if (ri < 0 && rj < 0) continue;
            if (ri < 0) target = rj;
            else if (rj < 0) target = ri;
            else target = d.sys.positive_index(d.root(ri) + d.root(rj));
            if (!target || !in_v[*target]) continue;
            auto b = d.bracket(o.prebasis[i], o.prebasis[j]);
            for (const auto& v : o.v_of(*target))
                if (d.inner(b, v) != 0)
                    throw InvalidArgument("subalgebra closure fails: [" + describe_bracket(d, o.prebasis[i]) + ", " +
                                          describe_bracket(d, o.prebasis[j]) + "] = " + describe_bracket(d, b) +
                                          " has a component in V");
        }

    // orthonormal bases, block by block
    {
        std::vector<Vec<Rational>> block;
        int cur = -2;
        auto flush = [&] {
            if (block.empty()) return;
            for (auto& t : orthonormalize_an(d, block)) {
                o.tangent.push_back(std::move(t));
                o.tangent_root.push_back(cur);
            }
            block.clear();
        };
        for (std::size_t i = 0; i < o.prebasis.size(); ++i) {
            if (o.prebasis_root[i] != cur) {
                flush();
                cur = o.prebasis_root[i];
            }
            block.push_back(o.prebasis[i]);
        }
        flush();
    }
    for (const auto& e : o.v.entries)
        for (auto& n : orthonormalize_an(d, e.basis)) {
            o.normal.push_back(std::move(n));
            o.normal_root.push_back(e.root);
        }
    for (int i = 0; i < o.dim_s(); ++i)
        if (o.tangent_root[i] < 0) o.a_columns.push_back(i);

    // string partition modulo the lattice of the V roots
    std::vector<Coeffs> gens;
    for (const auto& e : o.v.entries) gens.push_back(d.root(e.root));
    auto classes = d.sys.lattice_classes(gens);
    std::optional<std::pair<int, int>> pair;
    if (o.v.entries.size() == 2) {
        auto s0 = o.v.entries[0].root, s1 = o.v.entries[1].root;
        const auto& c0 = d.root(s0);
        const auto& c1 = d.root(s1);
        int i0 = -1, i1 = -1;
        for (int k = 0; k < d.sys.rank; ++k) {
            if (c0 == d.sys.simple(k)) i0 = k;
            if (c1 == d.sys.simple(k)) i1 = k;
        }
        if (i0 >= 0 && i1 >= 0 && d.sys.cartan_integer(c0, c1) == -1 && d.sys.cartan_integer(c1, c0) == -1)
            pair = {i0, i1};
    }
    for (const auto& cl : classes) {
        PartitionBlock b;
        b.roots = cl;
        bool plane = false;
        for (int r : cl) plane |= in_v[r];
        int lowest = cl[0];
        for (int r : cl)
            if (d.sys.level(d.root(r)) < d.sys.level(d.root(lowest))) lowest = r;
        if (plane) {
            b.shape = "plane";
        } else if (pair) {
            b.cls = d.sys.pair_string_class(pair->first, pair->second, d.root(lowest));
            b.shape = to_string(b.cls->shape);
        } else {
            b.shape = cl.size() == 1 ? "singleton" : "other";
        }
        // order columns by the class member order when available
        std::vector<int> order = cl;
        if (b.cls) {
            order.clear();
            for (const auto& m : b.cls->members) order.push_back(d.root_index(m.coeffs));
        }
        b.roots = order;
        for (int r : order)
            for (int i = 0; i < o.dim_s(); ++i)
                if (o.tangent_root[i] == r) b.columns.push_back(i);
        o.partition.push_back(std::move(b));
    }
    return o;
}

inline OrbitModel build_orbit(const Decomposition& d, VSpec spec) {
    return build_orbit(std::make_shared<const Decomposition>(d), std::move(spec));
}

// ---- shape operators -------------------------------------------------------

struct ShapeMatrix {
    Matrix<double> m;
    double symmetry_residual;
};

/// M_ij = ⟨S_ξ e_i, e_j⟩_AN with S_ξ X = −(∇_X ξ)^⊤, ξ given as a full a ⊕ n vector.
inline ShapeMatrix shape_operator_vec(const OrbitModel& o, const Vec<double>& xi) {
    const Decomposition& d = o.d();
    int n = o.dim_s();
    ShapeMatrix s{Matrix<double>(n, n), 0.0};
    for (int i = 0; i < n; ++i) {
        auto w = levi_civita(d, o.tangent[i], xi);
        for (int j = 0; j < n; ++j) s.m(i, j) = -d.metric_an(w, o.tangent[j]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.symmetry_residual = std::max(s.symmetry_residual, std::abs(s.m(i, j) - s.m(j, i)));
    return s;
}

/// Same, with ξ given by coordinates in the normal basis; rejects non-unit directions.
inline ShapeMatrix shape_operator(const OrbitModel& o, const Vec<double>& coords) {
    double n2 = dot(coords, coords);
    if (std::abs(n2 - 1) > 1e-10) throw InvalidArgument("shape_operator: ξ is not a unit normal");
    return shape_operator_vec(o, o.normal_vector(coords));
}

/// Shape operators of the normal basis; S_ξ is linear in ξ.
struct ShapeField {
    std::vector<Matrix<double>> basis_ops;
    double symmetry_residual = 0;

    explicit ShapeField(const OrbitModel& o) {
        for (int k = 0; k < o.dim_v(); ++k) {
            auto s = shape_operator_vec(o, o.normal[k]);
            symmetry_residual = std::max(symmetry_residual, s.symmetry_residual);
            basis_ops.push_back(std::move(s.m));
        }
    }
    Matrix<double> at(const Vec<double>& c) const {
        Matrix<double> m(basis_ops[0].rows, basis_ops[0].cols);
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k] != 0)
                for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] += c[k] * basis_ops[k].data[i];
        return m;
    }
};

struct Tolerances {
    double cpc_tol = 1e-8;
    double cluster_tol = 1e-7;
    double symmetry_tol = 1e-10;
};

struct SpectrumReport {
    Vec<double> direction;
    Vec<double> values;                 ///< sorted, with multiplicity
    std::vector<Cluster> eigenvalues;
    double cluster_tol;
    double self_adjoint_residual;
};

inline Matrix<double> symmetrize(const Matrix<double>& m) {
    Matrix<double> s = m;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) s(i, j) = (m(i, j) + m(j, i)) / 2;
    return s;
}

inline SpectrumReport spectrum_of(const Matrix<double>& m, const Vec<double>& dir, double residual, double cluster_tol) {
    if (residual > 1e-8)
        throw ConsistencyError("self-adjointness", "shape operator symmetry residual " + std::to_string(residual));
    SpectrumReport r;
    r.direction = dir;
    r.values = m.rows ? symmetric_eigenvalues(symmetrize(m)) : Vec<double>{};
    r.eigenvalues = cluster_values(r.values, cluster_tol);
    r.cluster_tol = cluster_tol;
    r.self_adjoint_residual = residual;
    return r;
}

inline SpectrumReport principal_curvatures(const OrbitModel& o, const Vec<double>& coords, double cluster_tol = 1e-7) {
    auto s = shape_operator(o, coords);
    return spectrum_of(s.m, coords, s.symmetry_residual, cluster_tol);
}

struct AustereMinimal {
    bool austere;
    bool minimal;
};

inline AustereMinimal austere_minimal_check(const SpectrumReport& r) {
    const auto& v = r.values;
    bool austere = true;
    double tr = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        austere &= std::abs(v[i] + v[v.size() - 1 - i]) <= r.cluster_tol;
        tr += v[i];
    }
    return {austere, std::abs(tr) <= 1e-8};
}

// ---- CPC sweep -------------------------------------------------------------

struct SamplerConfig {
    std::uint64_t seed = 42;
    int grid_points = 33;
    int random_samples = 128;
    Tolerances tol;
};

struct CpcVerdict {
    bool is_cpc = true;
    double max_spectrum_deviation = 0;
    std::pair<Vec<double>, Vec<double>> witness_directions;
    int samples = 0;
    Vec<double> reference_spectrum;
    double symmetry_residual = 0;
};

/// Unit directions (normal-basis coordinates) probed by the sweep.
inline std::vector<Vec<double>> sweep_directions(int dim_v, const SamplerConfig& cfg) {
    std::vector<Vec<double>> dirs;
    const double pi = std::acos(-1.0);
    if (dim_v == 1) {
        dirs = {{1.0}, {-1.0}};
    } else if (dim_v == 2) {
        for (int k = 0; k < cfg.grid_points; ++k) {
            double phi = cfg.grid_points == 1 ? 0 : (pi / 2) * k / (cfg.grid_points - 1);
            dirs.push_back({std::cos(phi), std::sin(phi)});
        }
    } else {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int s = 0; s < cfg.random_samples; ++s) {
            Vec<double> v(dim_v);
            double n = 0;
            do {
                for (auto& x : v) x = g(rng);
                n = std::sqrt(dot(v, v));
            } while (n < 1e-6);
            for (auto& x : v) x /= n;
            dirs.push_back(v);
        }
        for (int i = 0; i < dim_v; ++i) dirs.push_back(unit<double>(dim_v, i));
        const double h = 1 / std::sqrt(2.0);
        for (int i = 0; i < dim_v; ++i)
            for (int j = i + 1; j < dim_v; ++j)
                for (double sg : {1.0, -1.0}) {
                    Vec<double> v(dim_v, 0.0);
                    v[i] = h;
                    v[j] = sg * h;
                    dirs.push_back(v);
                }
    }
    return dirs;
}

inline CpcVerdict cpc_sweep(const OrbitModel& o, const SamplerConfig& cfg = {}) {
    if (o.dim_v() < 1) throw InvalidArgument("cpc_sweep: dim V must be >= 1");
    ShapeField field(o);
    auto dirs = sweep_directions(o.dim_v(), cfg);
    std::vector<Vec<double>> spectra;
    for (const auto& c : dirs)
        spectra.push_back(spectrum_of(field.at(c), c, field.symmetry_residual, cfg.tol.cluster_tol).values);
    CpcVerdict v;
    v.samples = int(dirs.size());
    v.symmetry_residual = field.symmetry_residual;
    v.reference_spectrum = spectra[0];
    v.witness_directions = {dirs[0], dirs[0]};
    for (std::size_t i = 0; i < spectra.size(); ++i)
        for (std::size_t j = i + 1; j < spectra.size(); ++j) {
            double dv = spectrum_distance(spectra[i], spectra[j]);
            if (dv > v.max_spectrum_deviation) {
                v.max_spectrum_deviation = dv;
                v.witness_directions = {dirs[i], dirs[j]};
            }
        }
    v.is_cpc = v.max_spectrum_deviation <= cfg.tol.cpc_tol;
    return v;
}

/// S_ξ w = −(∇_w ξ)^⊤ as a full vector, for w in s and ξ given as a full a ⊕ n vector.
inline Vec<double> shape_apply(const OrbitModel& o, const Vec<double>& xi, const Vec<double>& w) {
    const Decomposition& d = o.d();
    auto g = levi_civita(d, w, xi);
    Vec<double> out = zeros<double>(d.dim);
    for (const auto& e : o.tangent) axpy(-d.metric_an(g, e), e, out);
    return out;
}

// ---- string blocks ---------------------------------------------------------

struct StringBlockResult {
    Matrix<double> block;
    double leakage;
};

/// Restriction of S_ξ to a partition block; throws if S_ξ leaks out of the block.
inline StringBlockResult string_block(const OrbitModel& o, const Matrix<double>& shape, int block_index,
                                      double max_leakage = 1e-9) {
    const auto& cols = o.partition.at(block_index).columns;
    std::vector<bool> inside(o.dim_s(), false);
    for (int c : cols) inside[c] = true;
    StringBlockResult r{Matrix<double>(cols.size(), cols.size()), 0.0};
    for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b) r.block(a, b) = shape(cols[a], cols[b]);
    for (int c : cols)
        for (int j = 0; j < o.dim_s(); ++j)
            if (!inside[j]) r.leakage = std::max({r.leakage, std::abs(shape(c, j)), std::abs(shape(j, c))});
    if (r.leakage > max_leakage)
        throw ConsistencyError("string-invariance", "S_ξ leaks out of class block by " + std::to_string(r.leakage));
    return r;
}

inline StringBlockResult string_block(const OrbitModel& o, const Vec<double>& coords, int block_index) {
    return string_block(o, shape_operator(o, coords).m, block_index);
}

}  // namespace cpc
