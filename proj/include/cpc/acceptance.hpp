#pragma once

#include <chrono>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "cpc/construct.hpp"
#include "cpc/identities.hpp"

namespace cpc {

struct AcceptanceRow {
    std::string claim;
    std::string expected;   ///< value the criterion asks for
    std::string computed;
    double tolerance = 0;   ///< 0 means exact
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<AcceptanceRow> rows;
    std::string note;
    double seconds = 0;     ///< wall time, not part of the determinism contract

    bool pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return !rows.empty();
    }
};

struct AcceptanceOptions {
    std::uint64_t seed = 42;
    SamplerConfig sampler;
    IdentityOptions identities;
};

namespace detail {

inline std::string num(double x, const char* f = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}
inline std::string sci(double x) { return num(x, "%.2e"); }

inline std::string spectrum_str(const Vec<double>& v, double tol = 1e-7) {
    std::string s = "{";
    bool first = true;
    for (const auto& c : cluster_values(v, tol)) {
        double x = std::abs(c.value) < tol ? 0.0 : c.value;
        s += (first ? "" : ", ") + num(x) + (c.multiplicity > 1 ? " x" + std::to_string(c.multiplicity) : "");
        first = false;
    }
    return s + "}";
}

/// Sorted vector with each value repeated `m` times.
inline Vec<double> repeated(std::initializer_list<double> vals, int m) {
    Vec<double> out;
    for (double x : vals)
        for (int k = 0; k < m; ++k) out.push_back(x);
    std::sort(out.begin(), out.end());
    return out;
}

/// max over sweep directions of the distance between the spectrum of S_ξ and `expected`.
inline double spectrum_error(const OrbitModel& o, const Vec<double>& expected, const SamplerConfig& cfg) {
    ShapeField f(o);
    double worst = 0;
    for (const auto& c : sweep_directions(o.dim_v(), cfg)) {
        auto r = spectrum_of(f.at(c), c, f.symmetry_residual, cfg.tol.cluster_tol);
        worst = std::max(worst, spectrum_distance(r.values, expected));
    }
    return worst;
}

struct BlockScan {
    int blocks = 0;
    double max_error = 0;
    double max_spread = 0;   ///< spectrum variation over the grid
    double max_leakage = 0;
    Vec<double> sample;
};

/// Spectra of all blocks of `shape` over the φ-grid of a two-dimensional V.
inline BlockScan scan_blocks(const OrbitModel& o, const std::string& shape,
                             const std::function<Vec<double>(int cols)>& expected, const SamplerConfig& cfg) {
    BlockScan s;
    ShapeField f(o);
    auto dirs = sweep_directions(o.dim_v(), cfg);
    for (int b = 0; b < int(o.partition.size()); ++b) {
        if (o.partition[b].shape != shape) continue;
        ++s.blocks;
        Vec<double> first;
        for (const auto& c : dirs) {
            auto sb = string_block(o, f.at(c), b);
            auto ev = symmetric_eigenvalues(symmetrize(sb.block));
            s.max_leakage = std::max(s.max_leakage, sb.leakage);
            s.max_error = std::max(s.max_error, spectrum_distance(ev, expected(int(ev.size()))));
            if (first.empty()) first = ev;
            s.max_spread = std::max(s.max_spread, spectrum_distance(ev, first));
        }
        if (s.sample.empty()) s.sample = first;
    }
    return s;
}

template <class F>
CriterionResult timed(int id, std::string title, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult c;
    c.id = id;
    c.title = std::move(title);
    body(c);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

inline AcceptanceRow at_most(std::string claim, std::string expected, double value, double tol) {
    return {std::move(claim), std::move(expected), sci(value), tol, value <= tol};
}
inline AcceptanceRow equal(std::string claim, std::string expected, const std::string& computed, bool ok) {
    return {std::move(claim), std::move(expected), computed, 0, ok};
}

}  // namespace detail

inline CriterionResult acceptance_a2_spectrum(const AcceptanceOptions& opt) {
    return detail::timed(1, "A2 spectrum, sl3(C) real lines", [&](CriterionResult& c) {
        auto d = make_decomposition(build_sl_complex(3));
        auto o = build_case_II(d, 0, 1, {d->root_space(d->simple_index(0))[0]}, {d->root_space(d->simple_index(1))[0]});
        const double h = 1 / std::sqrt(2.0);
        auto expected = Vec<double>{-h, 0, 0, 0, 0, h};
        auto v = cpc_sweep(o, opt.sampler);
        c.rows.push_back(detail::at_most("spectrum at every sampled normal", "{-1/sqrt2, 0 x4, 1/sqrt2}",
                                         detail::spectrum_error(o, expected, opt.sampler), 1e-8));
        c.rows.push_back(detail::at_most("CPC deviation", "0", v.max_spectrum_deviation, 1e-8));
        int zeros = 0;
        for (double x : v.reference_spectrum) zeros += std::abs(x) <= 1e-8;
        int top = int(d->pos_idx[d->root_index({1, 1})].size());
        c.rows.push_back(detail::equal("multiplicity of 0", "dim g_{a0+a1} + 2 = " + std::to_string(top + 2),
                                       std::to_string(zeros), zeros == top + 2));
        c.note = "sweep of " + std::to_string(v.samples) + " directions, spectrum " + detail::spectrum_str(v.reference_spectrum);
    });
}

inline CriterionResult acceptance_quaternionic(const AcceptanceOptions& opt) {
    return detail::timed(2, "sl3(H) complex lines, case II-ii-b", [&](CriterionResult& c) {
        auto d = make_decomposition(build_sl_quaternion(3));
        auto ex = complex_example(*d, 0, 1);
        auto o = build_orbit(d, ex.spec);
        const double h = 1 / std::sqrt(2.0);
        auto expected = detail::repeated({-h, h}, 2);
        for (int k = 0; k < 6; ++k) expected.push_back(0);
        std::sort(expected.begin(), expected.end());
        auto v = cpc_sweep(o, opt.sampler);
        c.rows.push_back(detail::equal("case tag", "II-ii-b", ex.spec.case_tag, ex.spec.case_tag == "II-ii-b"));
        c.rows.push_back(detail::equal("dim [V0,V1]", "2", std::to_string(ex.dim_bracket), ex.dim_bracket == 2));
        c.rows.push_back(detail::at_most("spectrum at every sampled normal", "{-1/sqrt2 x2, 0 x6, 1/sqrt2 x2}",
                                         detail::spectrum_error(o, expected, opt.sampler), 1e-8));
        c.rows.push_back(detail::at_most("CPC deviation", "0", v.max_spectrum_deviation, 1e-8));
        c.rows.push_back(detail::at_most("complex-structure certificate residual", "0", ex.certificate.max_residual(), 1e-10));
        c.note = "case (II)(ii)(c) needs dim g_a = 8 and is out of scope";
    });
}

inline CriterionResult acceptance_codimension(const AcceptanceOptions& opt) {
    return detail::timed(3, "codimension exclusion, sl3(H) with dim V0 = dim V1 = 3", [&](CriterionResult& c) {
        auto d = make_decomposition(build_sl_quaternion(3));
        auto t0 = std::chrono::steady_clock::now();
        auto r = codimension_scan(d, 0, 1, 3, 3, 200, opt.seed, opt.sampler);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.rows.push_back(detail::equal("trials", "200", std::to_string(r.trials), r.trials == 200));
        c.rows.push_back(detail::equal("characterization passes", "0", std::to_string(r.algebraic_cpc), r.algebraic_cpc == 0));
        c.rows.push_back(detail::equal("sweep CPC verdicts", "0", std::to_string(r.sweep_cpc), r.sweep_cpc == 0));
        c.rows.push_back(detail::equal("runtime within 10 s", "yes", secs <= 10 ? "yes" : "no", secs <= 10));
        std::string hist;
        for (auto [k, n] : r.bracket_dims) hist += (hist.empty() ? "" : ", ") + std::to_string(k) + ":" + std::to_string(n);
        c.note = "dim [V0,V1] histogram {" + hist + "}, min deviation " + detail::sci(r.min_deviation_when_not);
    });
}

inline CriterionResult acceptance_case_ii(const AcceptanceOptions& opt) {
    return detail::timed(4, "canonical extension (ii), sl4(R)", [&](CriterionResult& c) {
        auto d = make_decomposition(build_sl_real(4));
        VSpec v;
        v.entries = {{d->simple_index(0), d->root_space(d->simple_index(0))},
                     {d->simple_index(1), d->root_space(d->simple_index(1))}};
        auto o = canonical_extension_scenario(d, 0, 1, v);
        const double a = std::sqrt(d->length_sq(d->simple_index(0)).get_d());
        auto s = detail::scan_blocks(o, "len3", [&](int n) { return detail::repeated({-a / 2, 0, a / 2}, n / 3); },
                                     opt.sampler);
        auto sw = cpc_sweep(o, opt.sampler);
        c.rows.push_back(detail::equal("sweep verdict", "CPC", sw.is_cpc ? "CPC" : "not CPC", sw.is_cpc));
        c.rows.push_back(detail::equal("len3 blocks", ">= 1", std::to_string(s.blocks), s.blocks >= 1));
        c.rows.push_back(detail::at_most("len3 block spectrum over 33-point grid", "{0, +-|a0|/2} = " +
                                         detail::spectrum_str(detail::repeated({-a / 2, 0, a / 2}, 1)),
                                         s.max_error, 1e-8));
        c.rows.push_back(detail::at_most("variation over phi", "0", s.max_spread, 1e-8));
    });
}

inline CriterionResult acceptance_case_iii(const AcceptanceOptions& opt) {
    return detail::timed(5, "canonical extension (iii), sp6(R)", [&](CriterionResult& c) {
        auto d = make_decomposition(build_sp_real(3));
        VSpec v;
        v.entries = {{d->simple_index(0), d->root_space(d->simple_index(0))},
                     {d->simple_index(1), d->root_space(d->simple_index(1))}};
        auto o = canonical_extension_scenario(d, 0, 1, v);
        const double a = std::sqrt(d->length_sq(d->simple_index(0)).get_d());
        auto expected = [&](int n) { return detail::repeated({-a, -a / 2, 0, 0, a / 2, a}, n / 6); };
        auto s = detail::scan_blocks(o, "len6", expected, opt.sampler);
        c.rows.push_back(detail::equal("len6 blocks", ">= 1", std::to_string(s.blocks), s.blocks >= 1));
        c.rows.push_back(detail::at_most("len6 block spectrum over 33-point grid",
                                         "{+-|a0|, +-|a0|/2, 0 x2} = " + detail::spectrum_str(expected(6)), s.max_error, 1e-8));
        for (int b = 0; b < int(o.partition.size()); ++b) {
            if (o.partition[b].shape != "len6") continue;
            auto k = commutation_identity(o, b);
            c.rows.push_back(detail::at_most("[xi_k+1,[xi_k,Y]] = 2[xi_k,[xi_k+1,Y]]", "constant 2", k.ad_residual, 1e-10));
            c.rows.push_back(detail::at_most("phi_k+1 phi_k = 2 phi_k phi_k+1 on phi_k(g_l)", "constant 2",
                                             k.phi_residual_2, 1e-10));
            c.note = "the phi-compositions satisfy L = " + detail::num(k.phi_ratio) + " R (|L - R| = " +
                     detail::sci(k.phi_residual_1) + ", |L| = " + detail::num(k.norm_l) + ", |R| = " +
                     detail::num(k.norm_r) + "); both are isometries, so the constant 2 only holds for the ad-form";
            break;
        }
    });
}

inline CriterionResult acceptance_negative(const AcceptanceOptions& opt) {
    return detail::timed(6, "negative controls", [&](CriterionResult& c) {
        const double pi = std::acos(-1.0);
        auto d4 = make_decomposition(build_sl_real(4));
        {
            VSpec v;
            for (int i : {0, 2}) v.entries.push_back({d4->simple_index(i), d4->root_space(d4->simple_index(i))});
            auto o = build_orbit(d4, v);
            auto sw = cpc_sweep(o, opt.sampler);
            c.rows.push_back(detail::equal("(a) orthogonal roots: sweep verdict", "not CPC", sw.is_cpc ? "CPC" : "not CPC",
                                           !sw.is_cpc));
            ShapeField f(o);
            double realized = 0;
            for (int b = 0; b < int(o.partition.size()); ++b) {
                if (o.partition[b].columns.size() != 4) continue;
                auto e0 = symmetric_eigenvalues(symmetrize(string_block(o, f.at({1.0, 0.0}), b).block));
                auto e1 = symmetric_eigenvalues(symmetrize(string_block(o, f.at({std::cos(pi / 4), std::sin(pi / 4)}), b).block));
                realized = std::max(realized, spectrum_distance(e0, e1));
            }
            double abstract = spectrum_distance(obstruction_block(BlockKind::orthogonal4, 0).spectrum,
                                                obstruction_block(BlockKind::orthogonal4, pi / 4).spectrum);
            c.rows.push_back({"(a) realized 4x4 block, phi = 0 vs pi/4", "varies (>= 0.1)", detail::num(realized), 0.1,
                              realized >= 0.1});
            c.rows.push_back({"(a) displayed 4x4 block, phi = 0 vs pi/4", "varies (>= 0.1)", detail::num(abstract), 0.1,
                              abstract >= 0.1});
        }
        {
            int top = d4->root_index({1, 1, 0});
            VSpec v;
            for (int r : {d4->simple_index(0), d4->simple_index(1), top}) v.entries.push_back({r, d4->root_space(r)});
            auto o = build_orbit(d4, v);
            ShapeField f(o);
            int non_austere = 0, total = 0;
            double asym = 0;
            for (const auto& dir : sweep_directions(o.dim_v(), opt.sampler)) {
                auto r = spectrum_of(f.at(dir), dir, f.symmetry_residual, opt.sampler.tol.cluster_tol);
                ++total;
                non_austere += !austere_minimal_check(r).austere;
                for (std::size_t i = 0; i < r.values.size(); ++i)
                    asym = std::max(asym, std::abs(r.values[i] + r.values[r.values.size() - 1 - i]));
            }
            c.rows.push_back({"(b) flat extension sl3(R) -> sl4(R): max spectrum asymmetry", "not austere (> 0)",
                              detail::num(asym) + " (" + std::to_string(non_austere) + "/" + std::to_string(total) +
                                  " directions)",
                              opt.sampler.tol.cluster_tol, non_austere > 0});
        }
        {
            auto d = make_decomposition(build_so_pq(2, 5));
            auto L = length_obstruction_scenario(d, opt.sampler);
            double ray = 0, res = 0;
            for (const auto& w : L.witness) {
                ray = std::max(ray, std::abs(w.rayleigh - w.expected));
                res = std::max(res, w.residual);
            }
            c.rows.push_back(detail::equal("(c) so(2,5) length obstruction: sweep verdict", "not CPC",
                                           L.verdict.is_cpc ? "CPC" : "not CPC", !L.verdict.is_cpc));
            c.rows.push_back(detail::at_most("(c) witness eigenvalue sin(phi)|a2|/2, |a2| = " + detail::num(L.alpha2_len),
                                             "sin(phi)|a2|/2", std::max(ray, res), 1e-8));
        }
    });
}

inline CriterionResult acceptance_g2(const AcceptanceOptions&) {
    return detail::timed(7, "G2 obstruction", [&](CriterionResult& c) {
        auto b = obstruction_block(BlockKind::G2, 0);
        const double r = std::sqrt(3.5);
        c.rows.push_back(detail::at_most("spectrum of [[0,4,0],[1/2,0,3],[0,1/2,0]]", "{+-sqrt(7/2), 0}",
                                         std::max(spectrum_distance(b.spectrum, {-r, 0, r}), b.max_imag), 1e-12));
        double gap = 1e300;
        for (double x : b.spectrum) gap = std::min(gap, std::abs(std::abs(x) - std::sqrt(1.5)));
        c.rows.push_back({"distance to |a0|/2 = sqrt(3/2)", "no match", detail::num(gap), 1e-8, gap > 1e-8});
        c.note = "spectrum " + detail::spectrum_str(b.spectrum);
    });
}

inline CriterionResult acceptance_normalizer(const AcceptanceOptions& opt) {
    return detail::timed(8, "normalizer certificate, sl3(C)", [&](CriterionResult& c) {
        auto t0 = std::chrono::steady_clock::now();
        auto d = make_decomposition(build_sl_complex(3));
        int r0 = d->simple_index(0), r1 = d->simple_index(1);
        auto proper = normalizer_check(build_case_II(d, 0, 1, {d->root_space(r0)[0]}, {d->root_space(r1)[0]}), opt.seed);
        auto full = normalizer_check(build_case_II(d, 0, 1, d->root_space(r0), d->root_space(r1)), opt.seed);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        auto tf = [](bool b) { return std::string(b ? "true" : "false"); };
        c.rows.push_back(detail::equal("proper V: transitive_possible", "false", tf(proper.transitive_possible),
                                       !proper.transitive_possible));
        c.rows.push_back(detail::equal("V = g_a0 + g_a1: transitive_possible", "true", tf(full.transitive_possible),
                                       full.transitive_possible));
        c.rows.push_back(detail::equal("runtime within 2 s", "yes", secs <= 2 ? "yes" : "no", secs <= 2));
        c.note = "dim m: proper " + std::to_string(proper.m_dim) + " (before closure " +
                 std::to_string(proper.tangent_normalizer_dim) + "), full " + std::to_string(full.m_dim);
    });
}

inline CriterionResult acceptance_identities(const AcceptanceOptions& opt) {
    return detail::timed(9, "exact identity battery", [&](CriterionResult& c) {
        for (const auto& s : standard_spaces()) {
            auto d = make_decomposition(build_space(s.family, s.n, s.q));
            auto rows = identity_battery(*d, opt.identities);
            long inst = 0, fail = 0;
            std::string first;
            for (const auto& r : rows) {
                inst += r.instances;
                fail += r.failures;
                if (r.failures && first.empty()) first = r.identity + " " + r.first_failure;
            }
            c.rows.push_back(detail::equal(s.label() + ": " + std::to_string(rows.size()) + " identities", "0 failures",
                                           std::to_string(fail) + " failures / " + std::to_string(inst) + " instances" +
                                               (first.empty() ? "" : " (" + first + ")"),
                                           fail == 0));
        }
    });
}

inline CriterionResult acceptance_equivalence(const AcceptanceOptions& opt) {
    return detail::timed(10, "sweep verdict equals characterization_check", [&](CriterionResult& c) {
        int k = 0;
        for (const auto& s : standard_spaces()) {
            if (s.n != 3 || s.family.rfind("sl_", 0) != 0) continue;
            auto d = make_decomposition(build_space(s.family, s.n));
            auto r = equivalence_scan(d, 0, 1, 100, derive_seed(opt.seed, k++), opt.sampler);
            c.rows.push_back(detail::equal(s.label() + ": mismatches in " + std::to_string(r.trials) + " trials", "0",
                                           std::to_string(r.mismatches) + " (" + std::to_string(r.algebraic_cpc) + " CPC)",
                                           r.mismatches == 0 && r.trials == 100));
        }
    });
}

inline constexpr int acceptance_count = 10;

inline CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {}) {
    switch (id) {
        case 1: return acceptance_a2_spectrum(opt);
        case 2: return acceptance_quaternionic(opt);
        case 3: return acceptance_codimension(opt);
        case 4: return acceptance_case_ii(opt);
        case 5: return acceptance_case_iii(opt);
        case 6: return acceptance_negative(opt);
        case 7: return acceptance_g2(opt);
        case 8: return acceptance_normalizer(opt);
        case 9: return acceptance_identities(opt);
        case 10: return acceptance_equivalence(opt);
    }
    throw InvalidArgument("no acceptance criterion " + std::to_string(id));
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}, std::set<int> only = {}) {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= acceptance_count; ++i)
        if (only.empty() || only.count(i)) out.push_back(run_criterion(i, opt));
    return out;
}

}  // namespace cpc
