#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace cpc {

using Rational = mpq_class;

template <class T>
using Vec = std::vector<T>;

/// Raised when an input violates an operation's precondition.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computed object violates one of its own invariants.
struct ConsistencyError : std::runtime_error {
    std::string invariant;
    ConsistencyError(std::string inv, const std::string& msg)
        : std::runtime_error(inv + ": " + msg), invariant(std::move(inv)) {}
};

/// Dense row-major matrix. Small sizes only (dim <= ~40).
template <class T>
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}

    T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    /// Matrix whose columns are the given vectors.
    static Matrix from_columns(const std::vector<Vec<T>>& cs, std::size_t nrows) {
        Matrix m(nrows, cs.size());
        for (std::size_t j = 0; j < cs.size(); ++j)
            for (std::size_t i = 0; i < nrows; ++i) m(i, j) = cs[j][i];
        return m;
    }
    static Matrix from_rows(const std::vector<Vec<T>>& rs, std::size_t ncols) {
        Matrix m(rs.size(), ncols);
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < ncols; ++j) m(i, j) = rs[i][j];
        return m;
    }

    Vec<T> row(std::size_t i) const {
        return Vec<T>(data.begin() + i * cols, data.begin() + (i + 1) * cols);
    }
    Vec<T> col(std::size_t j) const {
        Vec<T> v(rows);
        for (std::size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Matrix transpose() const {
        Matrix t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const Matrix& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols != b.rows) throw InvalidArgument("matrix product: shape mismatch");
    Matrix<T> c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const T& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

template <class T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
    return a;
}

template <class T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] -= b.data[i];
    return a;
}

template <class T>
Matrix<T> operator*(const std::type_identity_t<T>& s, Matrix<T> a) {
    for (auto& x : a.data) x *= s;
    return a;
}

template <class T>
Vec<T> operator*(const Matrix<T>& a, const Vec<T>& v) {
    Vec<T> r(a.rows, T(0));
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (v[j] != 0) r[i] += a(i, j) * v[j];
    return r;
}

// ---- vector helpers -------------------------------------------------------

template <class T>
Vec<T> zeros(std::size_t n) { return Vec<T>(n, T(0)); }

template <class T>
Vec<T> unit(std::size_t n, std::size_t i) {
    Vec<T> v(n, T(0));
    v[i] = T(1);
    return v;
}

template <class T>
Vec<T> add(Vec<T> a, const Vec<T>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

template <class T>
Vec<T> sub(Vec<T> a, const Vec<T>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

template <class T>
Vec<T> scale(const std::type_identity_t<T>& s, Vec<T> a) {
    for (auto& x : a) x *= s;
    return a;
}

/// a += s*b
template <class T>
void axpy(const std::type_identity_t<T>& s, const Vec<T>& b, Vec<T>& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != 0) a[i] += s * b[i];
}

template <class T>
bool is_zero(const Vec<T>& v) {
    return std::all_of(v.begin(), v.end(), [](const T& x) { return x == 0; });
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// v^T G w
template <class T>
T bilinear(const Matrix<T>& g, const Vec<T>& v, const Vec<T>& w) {
    T s(0);
    for (std::size_t i = 0; i < g.rows; ++i) {
        if (v[i] == 0) continue;
        T r(0);
        for (std::size_t j = 0; j < g.cols; ++j)
            if (w[j] != 0 && g(i, j) != 0) r += g(i, j) * w[j];
        s += v[i] * r;
    }
    return s;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline Vec<double> to_double(const Vec<Rational>& v) {
    Vec<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].get_d();
    return r;
}

inline Matrix<double> to_double(const Matrix<Rational>& m) {
    Matrix<double> r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) r.data[i] = m.data[i].get_d();
    return r;
}

inline double norm_inf(const Vec<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs(const Matrix<double>& m) {
    double r = 0;
    for (double x : m.data) r = std::max(r, std::abs(x));
    return r;
}

// ---- exact linear algebra -------------------------------------------------

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix<Rational>& m) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && m(p, c) == 0) ++p;
        if (p == m.rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
        Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols; ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols; ++j)
                if (m(r, j) != 0) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

inline std::size_t rank(Matrix<Rational> m) { return rref(m).size(); }

/// Rank of a family of vectors.
inline std::size_t rank(const std::vector<Vec<Rational>>& vs) {
    if (vs.empty()) return 0;
    return rank(Matrix<Rational>::from_rows(vs, vs[0].size()));
}

/// Basis of {x : m x = 0}.
inline std::vector<Vec<Rational>> kernel(Matrix<Rational> m) {
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols, false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<Vec<Rational>> out;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_piv[f]) continue;
        Vec<Rational> x(m.cols, 0);
        x[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m(r, f);
        out.push_back(std::move(x));
    }
    return out;
}

/// Some solution of m x = b, or nullopt.
inline std::optional<Vec<Rational>> solve(const Matrix<Rational>& m, const Vec<Rational>& b) {
    Matrix<Rational> aug(m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
        aug(i, m.cols) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
    Vec<Rational> x(m.cols, 0);
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, m.cols);
    return x;
}

inline Matrix<Rational> inverse(const Matrix<Rational>& m) {
    if (m.rows != m.cols) throw InvalidArgument("inverse: not square");
    std::size_t n = m.rows;
    Matrix<Rational> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) throw InvalidArgument("inverse: singular matrix");
    Matrix<Rational> r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
}

/// Coordinates of v in the (independent) family `basis`, or nullopt if v is outside the span.
inline std::optional<Vec<Rational>> coordinates(const std::vector<Vec<Rational>>& basis,
                                                const Vec<Rational>& v) {
    if (basis.empty()) return is_zero(v) ? std::optional<Vec<Rational>>(Vec<Rational>{}) : std::nullopt;
    return solve(Matrix<Rational>::from_columns(basis, v.size()), v);
}

inline bool in_span(const std::vector<Vec<Rational>>& basis, const Vec<Rational>& v) {
    return coordinates(basis, v).has_value();
}

/// Independent subfamily spanning the same space (first-come order).
inline std::vector<Vec<Rational>> independent_subset(const std::vector<Vec<Rational>>& vs) {
    std::vector<Vec<Rational>> out;
    for (const auto& v : vs) {
        if (is_zero(v)) continue;
        out.push_back(v);
        if (rank(out) < out.size()) out.pop_back();
    }
    return out;
}

/// Orthogonal (not normalized) Gram-Schmidt for a bilinear form given by gram.
inline std::vector<Vec<Rational>> orthogonalize(const std::vector<Vec<Rational>>& vs,
                                                const Matrix<Rational>& gram) {
    std::vector<Vec<Rational>> out;
    std::vector<Rational> norms;
    for (const auto& v : vs) {
        Vec<Rational> w = v;
        for (std::size_t k = 0; k < out.size(); ++k) {
            Rational c = bilinear(gram, v, out[k]) / norms[k];
            axpy(Rational(-c), out[k], w);
        }
        Rational n = bilinear(gram, w, w);
        if (n == 0) continue;
        out.push_back(std::move(w));
        norms.push_back(n);
    }
    return out;
}

/// Vectors of span(space) orthogonal to span(sub) under gram.
inline std::vector<Vec<Rational>> orthogonal_complement(const std::vector<Vec<Rational>>& space,
                                                        const std::vector<Vec<Rational>>& sub,
                                                        const Matrix<Rational>& gram) {
    if (sub.empty()) return space;
    // x = sum c_i space_i with <x, sub_j> = 0
    Matrix<Rational> m(sub.size(), space.size());
    for (std::size_t j = 0; j < sub.size(); ++j)
        for (std::size_t i = 0; i < space.size(); ++i) m(j, i) = bilinear(gram, space[i], sub[j]);
    std::vector<Vec<Rational>> out;
    for (const auto& c : kernel(m)) {
        Vec<Rational> x = zeros<Rational>(space[0].size());
        for (std::size_t i = 0; i < space.size(); ++i)
            if (c[i] != 0) axpy(c[i], space[i], x);
        out.push_back(std::move(x));
    }
    return out;
}

/// True iff all leading principal minors are positive (exact Gaussian elimination).
inline bool positive_definite(Matrix<Rational> m) {
    std::size_t n = m.rows;
    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m(i, k) == 0) continue;
            Rational f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return true;
}

/// Uniform random rational vector with integer entries in [-bound, bound].
inline Vec<Rational> random_integer_vector(std::mt19937_64& rng, std::size_t n, int bound) {
    std::uniform_int_distribution<int> d(-bound, bound);
    Vec<Rational> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

/// Random integer combination of `basis` (never zero unless basis is empty).
inline Vec<Rational> random_combination(std::mt19937_64& rng, const std::vector<Vec<Rational>>& basis,
                                        int bound = 5) {
    if (basis.empty()) throw InvalidArgument("random_combination: empty basis");
    for (;;) {
        auto c = random_integer_vector(rng, basis.size(), bound);
        Vec<Rational> x = zeros<Rational>(basis[0].size());
        for (std::size_t i = 0; i < basis.size(); ++i) axpy(c[i], basis[i], x);
        if (!is_zero(x)) return x;
    }
}

/// Derive an independent seed for stream `k` of a base seed (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ---- floating point -------------------------------------------------------

/// Gram-Schmidt (twice) against an inner product. Throws with the index of a dependent input.
inline std::vector<Vec<double>> orthonormalize(
    const std::vector<Vec<double>>& vs,
    const std::function<double(const Vec<double>&, const Vec<double>&)>& inner, double tol = 1e-10) {
    std::vector<Vec<double>> out;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        Vec<double> w = vs[k];
        double n0 = std::sqrt(std::abs(inner(w, w)));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : out) axpy(-inner(w, e), e, w);
        double n = std::sqrt(std::abs(inner(w, w)));
        if (n <= tol * std::max(1.0, n0))
            throw InvalidArgument("orthonormalize: input vector " + std::to_string(k) +
                                  " is linearly dependent on its predecessors");
        for (auto& x : w) x /= n;
        out.push_back(std::move(w));
    }
    return out;
}

struct EigenResult {
    Vec<double> values;           ///< ascending
    Matrix<double> vectors;       ///< columns, matching values
};

/// Cyclic Jacobi for a symmetric matrix; stops when the off-diagonal Frobenius norm < tol.
inline EigenResult jacobi_eigen(Matrix<double> a, double tol = 1e-13, int max_sweeps = 100) {
    std::size_t n = a.rows;
    Matrix<double> v = Matrix<double>::identity(n);
    auto off = [&] {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };
    for (int sweep = 0; sweep < max_sweeps && off() >= tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
    EigenResult r{Vec<double>(n), Matrix<double>(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = a(idx[k], idx[k]);
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, idx[k]);
    }
    return r;
}

inline Vec<double> symmetric_eigenvalues(const Matrix<double>& a) { return jacobi_eigen(a).values; }

/// Roots of the monic cubic x^3 + a x^2 + b x + c.
inline std::vector<std::complex<double>> cubic_roots(double a, double b, double c) {
    const double pi = std::acos(-1.0);
    double p = b - a * a / 3, q = 2 * a * a * a / 27 - a * b / 3 + c;
    double shift = -a / 3;
    std::vector<std::complex<double>> r;
    double disc = q * q / 4 + p * p * p / 27;
    if (std::abs(p) < 1e-300 && std::abs(q) < 1e-300) {
        r.assign(3, shift);
    } else if (disc <= 0) {
        double m = 2 * std::sqrt(-p / 3);
        double arg = std::clamp(3 * q / (p * m), -1.0, 1.0);
        double t = std::acos(arg) / 3;
        for (int k = 0; k < 3; ++k) r.emplace_back(m * std::cos(t - 2 * pi * k / 3) + shift, 0.0);
    } else {
        double s = std::sqrt(disc);
        double u = std::cbrt(-q / 2 + s), w = std::cbrt(-q / 2 - s);
        r.emplace_back(u + w + shift, 0.0);
        double re = -(u + w) / 2 + shift, im = std::sqrt(3.0) / 2 * (u - w);
        r.emplace_back(re, im);
        r.emplace_back(re, -im);
    }
    return r;
}

/// Eigenvalues of a general 3x3 matrix through its exact characteristic polynomial.
inline std::vector<std::complex<double>> eigenvalues_3x3(const Matrix<Rational>& m) {
    if (m.rows != 3 || m.cols != 3) throw InvalidArgument("eigenvalues_3x3: need a 3x3 matrix");
    Rational tr = m(0, 0) + m(1, 1) + m(2, 2);
    Rational minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                      m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    Rational det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    // det(xI - M) = x^3 - tr x^2 + minors x - det
    auto r = cubic_roots(-tr.get_d(), minors.get_d(), -det.get_d());
    std::sort(r.begin(), r.end(), [](auto x, auto y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return r;
}

struct Cluster {
    double value;
    int multiplicity;
};

/// Group sorted values whose consecutive gaps are <= tol.
inline std::vector<Cluster> cluster_values(Vec<double> vals, double tol) {
    std::sort(vals.begin(), vals.end());
    std::vector<Cluster> out;
    std::size_t i = 0;
    while (i < vals.size()) {
        std::size_t j = i + 1;
        while (j < vals.size() && vals[j] - vals[j - 1] <= tol) ++j;
        double s = 0;
        for (std::size_t k = i; k < j; ++k) s += vals[k];
        out.push_back({s / double(j - i), int(j - i)});
        i = j;
    }
    return out;
}

/// L-infinity distance between two sorted spectra of equal length.
inline double spectrum_distance(const Vec<double>& a, const Vec<double>& b) {
    if (a.size() != b.size()) return INFINITY;
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace cpc
