#pragma once

#include <chrono>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpc/acceptance.hpp"

namespace cpc {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;
inline constexpr const char* artifact_version = "1.0.0";

/// Malformed scenario or command line; maps to exit status 2.
struct SchemaError : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

enum ExitStatus { exit_pass = 0, exit_check_failure = 1, exit_usage = 2, exit_consistency = 3 };

/// Exit status for an exception escaping a command.
inline int exit_status_of(const std::exception& e) {
    if (dynamic_cast<const ConsistencyError*>(&e)) return exit_consistency;
    if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e)) return exit_usage;
    return exit_consistency;
}

// ---- spaces ----------------------------------------------------------------

/// "sl_complex(3)", "so_pq(2,5)" or "sl_real:4".
inline SpaceSpec parse_space(const std::string& s) {
    static const std::regex paren(R"(^\s*([a-z_]+)\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$)");
    static const std::regex colon(R"(^\s*([a-z_]+)\s*:\s*(\d+)\s*(?::\s*(\d+)\s*)?$)");
    std::smatch m;
    if (!std::regex_match(s, m, paren) && !std::regex_match(s, m, colon))
        throw SchemaError("cannot parse space '" + s + "' (expected e.g. sl_complex(3) or so_pq(2,5))");
    SpaceSpec sp{m[1], std::stoi(m[2]), m[3].matched ? std::stoi(m[3]) : 0};
    static const std::set<std::string> families{"sl_real", "sl_complex", "sl_quaternion", "sp_real", "so_pq"};
    if (!families.count(sp.family)) throw SchemaError("unknown space family '" + sp.family + "'");
    if (sp.family == "so_pq" && sp.q == 0) throw SchemaError("so_pq needs two parameters, e.g. so_pq(2,5)");
    if (sp.family != "so_pq" && m[3].matched) throw SchemaError(sp.family + " takes one parameter");
    return sp;
}

inline SpaceSpec space_from_json(const json& j) {
    if (j.is_string()) return parse_space(j.get<std::string>());
    if (!j.is_object()) throw SchemaError("space must be a string or an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "family" && it.key() != "n" && it.key() != "q") throw SchemaError("space: unknown key '" + it.key() + "'");
    if (!j.contains("family") || !j["family"].is_string() || !j.contains("n") || !j["n"].is_number_integer())
        throw SchemaError("space needs string 'family' and integer 'n'");
    std::string s = j["family"].get<std::string>() + "(" + std::to_string(j["n"].get<int>());
    if (j.contains("q")) {
        if (!j["q"].is_number_integer()) throw SchemaError("space.q must be an integer");
        s += "," + std::to_string(j["q"].get<int>());
    }
    return parse_space(s + ")");
}

inline DecompPtr build_decomposition(const SpaceSpec& s) {
    if (s.n < 2 && s.family != "so_pq") throw InvalidArgument(s.family + ": n must be >= 2");
    return make_decomposition(build_space(s.family, s.n, s.q));
}

// ---- scenarios -------------------------------------------------------------

struct ScanSpec {
    int d0 = 3, d1 = 3, trials = 200;
};

struct Scenario {
    std::string name = "scenario";
    std::optional<SpaceSpec> space;
    std::optional<std::string> preset;
    json v = json::array();            ///< raw V entries (expanded at run time)
    std::pair<int, int> pair{0, 1};
    std::vector<std::string> checks;
    std::uint64_t seed = 42;
    Tolerances tol;
    bool expect_pass = true;
    std::optional<bool> expect_transitive;
    ScanSpec scan;
    bool checks_given = false;
};

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> k{"decompose", "invariants", "sweep", "characterize", "blocks", "normalizer", "codim-scan"};
    return k;
}

struct Preset {
    std::string name;
    SpaceSpec space;
    std::vector<std::string> checks;
    bool expect_pass;
    std::string description;
};

inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> p{
        {"a2-complex-lines", {"sl_complex", 3}, {"decompose", "sweep", "characterize"}, true,
         "V0, V1 real lines in g_a0, g_a1"},
        {"a2-full", {"sl_complex", 3}, {"decompose", "sweep", "characterize", "normalizer"}, true,
         "V = g_a0 + g_a1 (case II-i)"},
        {"main-theorem-I", {"sl_complex", 3}, {"decompose", "sweep"}, true, "V a line in g_a0"},
        {"main-theorem-II-ii-a", {"sl_quaternion", 3}, {"decompose", "sweep", "characterize"}, true,
         "V0, V1 real lines"},
        {"main-theorem-II-ii-b", {"sl_quaternion", 3}, {"decompose", "sweep", "characterize", "normalizer"}, true,
         "V0, V1 complex lines built from a complex structure on g_a0+a1"},
        {"canonical-ext-ii", {"sl_real", 4}, {"decompose", "sweep", "blocks"}, true, "V = g_a0 + g_a1 inside sl4"},
        {"canonical-ext-iii", {"sp_real", 3}, {"decompose", "sweep", "blocks"}, true, "V = g_a0 + g_a1 inside sp6"},
        {"orthogonal-roots", {"sl_real", 4}, {"decompose", "sweep", "blocks"}, false, "V = g_a0 + g_a2"},
        {"flat-extension", {"sl_real", 4}, {"decompose", "sweep"}, false,
         "V = g_a0 + g_a1 + g_a0+a1, canonical extension of the maximal flat of sl3(R)"},
        {"length-obstruction", {"so_pq", 2, 5}, {"decompose", "sweep"}, false,
         "V = hyperplane of the short simple root space + long simple root space"},
        {"codim-exclusion", {"sl_quaternion", 3}, {"codim-scan"}, true, "random 3-dimensional V0, V1"},
    };
    return p;
}

inline const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw SchemaError("unknown preset '" + name + "'");
}

namespace detail {

inline Coeffs coeffs_from_json(const json& j, int rank) {
    if (!j.is_array() || int(j.size()) != rank) throw SchemaError("root must be an array of " + std::to_string(rank) + " integers");
    Coeffs c;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw SchemaError("root coefficients must be integers");
        c.push_back(x.get<int>());
    }
    return c;
}

inline Rational rational_from_json(const json& x) {
    if (x.is_number_integer()) return Rational(x.get<long>());
    if (x.is_string()) {
        try {
            Rational q(x.get<std::string>());
            if (q.get_den() != 0) {
                q.canonicalize();
                return q;
            }
        } catch (const std::invalid_argument&) {
        }
    }
    throw SchemaError("basis coefficients must be integers or rational strings like \"-1/2\"");
}

inline json rational_vector_json(const Vec<Rational>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
}

}  // namespace detail

/// Explicit V entries: {"root": [..], one of "basis" | "dim" | "indices" | "full"}.
inline VSpec vspec_from_json(const Decomposition& d, const json& entries) {
    if (!entries.is_array()) throw SchemaError("v must be an array of entries");
    VSpec v;
    for (const auto& e : entries) {
        if (!e.is_object() || !e.contains("root")) throw SchemaError("each v entry needs a 'root'");
        int given = 0;
        for (auto it = e.begin(); it != e.end(); ++it) {
            const auto& k = it.key();
            if (k == "basis" || k == "dim" || k == "indices" || k == "full") ++given;
            else if (k != "root") throw SchemaError("v entry: unknown key '" + k + "'");
        }
        if (given != 1) throw SchemaError("v entry needs exactly one of basis, dim, indices, full");
        Coeffs c = detail::coeffs_from_json(e["root"], d.sys.rank);
        auto r = d.sys.positive_index(c);
        if (!r) throw InvalidArgument("v entry: " + coeffs_label(c) + " is not a positive root");
        auto g = d.root_space(*r);
        std::vector<Vec<Rational>> basis;
        if (e.contains("full")) {
            if (!e["full"].is_boolean() || !e["full"].get<bool>()) throw SchemaError("v entry: full must be true");
            basis = g;
        } else if (e.contains("dim")) {
            if (!e["dim"].is_number_integer()) throw SchemaError("v entry: dim must be an integer");
            int k = e["dim"].get<int>();
            if (k < 1 || k > int(g.size()))
                throw InvalidArgument("v entry: dim must lie in [1, " + std::to_string(g.size()) + "]");
            basis.assign(g.begin(), g.begin() + k);
        } else if (e.contains("indices")) {
            if (!e["indices"].is_array() || e["indices"].empty()) throw SchemaError("v entry: indices must be a nonempty array");
            for (const auto& i : e["indices"]) {
                if (!i.is_number_integer() || i.get<int>() < 0 || i.get<int>() >= int(g.size()))
                    throw InvalidArgument("v entry: index out of range for g_" + coeffs_label(c));
                basis.push_back(g[i.get<int>()]);
            }
        } else {
            if (!e["basis"].is_array() || e["basis"].empty()) throw SchemaError("v entry: basis must be a nonempty array");
            for (const auto& row : e["basis"]) {
                if (!row.is_array() || int(row.size()) != d.dim)
                    throw SchemaError("v entry: basis vectors need " + std::to_string(d.dim) + " coordinates");
                Vec<Rational> x;
                for (const auto& q : row) x.push_back(detail::rational_from_json(q));
                basis.push_back(std::move(x));
            }
            require_in_root_space(d, basis, *r, "V_" + coeffs_label(c));
        }
        if (rank(basis) != basis.size()) throw InvalidArgument("v entry: basis of g_" + coeffs_label(c) + " is dependent");
        for (const auto& old : v.entries)
            if (old.root == *r) throw SchemaError("v: root " + coeffs_label(c) + " listed twice");
        v.entries.push_back({*r, std::move(basis)});
    }
    if (v.entries.empty()) throw SchemaError("v must not be empty");
    return v;
}

inline json vspec_to_json(const Decomposition& d, const VSpec& v) {
    json entries = json::array();
    for (const auto& e : v.entries) {
        json basis = json::array();
        for (const auto& x : e.basis) basis.push_back(detail::rational_vector_json(x));
        entries.push_back({{"root", d.root(e.root)}, {"root_label", coeffs_label(d.root(e.root))}, {"basis", basis}});
    }
    return entries;
}

/// V of a preset on a given decomposition.
inline VSpec expand_preset(const std::string& name, const Decomposition& d, std::pair<int, int> pr) {
    auto [i0, i1] = pr;
    auto simple = [&](int i) {
        if (i < 0 || i >= d.sys.rank) throw InvalidArgument("preset " + name + ": simple root index out of range");
        return d.simple_index(i);
    };
    auto full = [&](int r) { return VEntry{r, d.root_space(r)}; };
    auto first = [&](int r, int k) {
        auto g = d.root_space(r);
        if (int(g.size()) < k) throw InvalidArgument("preset " + name + ": root space too small");
        g.resize(k);
        return VEntry{r, g};
    };
    VSpec v;
    if (name == "a2-complex-lines" || name == "main-theorem-II-ii-a") {
        require_pair(d, i0, i1);
        v = case_II_spec(d, i0, i1, first(simple(i0), 1).basis, first(simple(i1), 1).basis);
    } else if (name == "a2-full") {
        require_pair(d, i0, i1);
        v = case_II_spec(d, i0, i1, d.root_space(simple(i0)), d.root_space(simple(i1)));
    } else if (name == "main-theorem-I") {
        const auto& rs = d.sys.reduced_simple;
        if (std::find(rs.begin(), rs.end(), i0) == rs.end()) throw InvalidArgument("preset main-theorem-I: simple root not in Π′");
        v.entries = {first(simple(i0), 1)};
        v.case_tag = "I";
    } else if (name == "main-theorem-II-ii-b") {
        v = complex_example(d, i0, i1).spec;
    } else if (name == "canonical-ext-ii" || name == "canonical-ext-iii") {
        require_pair(d, i0, i1);
        v.entries = {full(simple(i0)), full(simple(i1))};
        v.case_tag = name == "canonical-ext-ii" ? "canonical-ii" : "canonical-iii";
    } else if (name == "orthogonal-roots") {
        int j = -1;
        for (int k = 0; k < d.sys.rank && j < 0; ++k)
            if (k != i0 && d.sys.cartan_integer(d.sys.simple(i0), d.sys.simple(k)) == 0) j = k;
        if (j < 0) throw InvalidArgument("preset orthogonal-roots: no simple root orthogonal to the first");
        v.entries = {full(simple(i0)), full(simple(j))};
    } else if (name == "flat-extension") {
        require_pair(d, i0, i1);
        int top = d.root_index(d.sys.simple(i0) + d.sys.simple(i1));
        v.entries = {full(simple(i0)), full(simple(i1)), full(top)};
    } else if (name == "length-obstruction") {
        if (d.sys.family != Family::B || d.sys.rank != 2) throw InvalidArgument("preset length-obstruction needs a B2 space");
        int s0 = d.simple_index(0), s1 = d.simple_index(1);
        int rs = d.length_sq(s0) < d.length_sq(s1) ? s0 : s1, rl = rs == s0 ? s1 : s0;
        auto g = d.root_space(rs);
        if (g.size() < 2) throw InvalidArgument("preset length-obstruction: short root space too small");
        v.entries = {{rs, {g.begin(), g.end() - 1}}, full(rl)};
    } else if (name == "codim-exclusion") {
        require_pair(d, i0, i1);
        v = case_II_spec(d, i0, i1, first(simple(i0), 1).basis, first(simple(i1), 1).basis);
    } else {
        throw SchemaError("unknown preset '" + name + "'");
    }
    return v;
}

inline Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("scenario must be a JSON object");
    static const std::set<std::string> keys{"schema_version", "name", "space", "preset", "v", "pair", "checks", "seed",
                                            "tolerances", "expect", "expect_transitive", "scan"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key())) throw SchemaError("unknown scenario key '" + it.key() + "'");
    if (j.contains("schema_version") && j["schema_version"] != schema_version)
        throw SchemaError("unsupported schema_version (expected " + std::to_string(schema_version) + ")");
    Scenario s;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw SchemaError("name must be a string");
        s.name = j["name"];
    }
    if (j.contains("preset")) {
        if (!j["preset"].is_string()) throw SchemaError("preset must be a string");
        const auto& p = find_preset(j["preset"]);
        s.preset = p.name;
        s.space = p.space;
        s.checks = p.checks;
        s.expect_pass = p.expect_pass;
        if (!j.contains("name")) s.name = p.name;
    }
    if (j.contains("space")) s.space = space_from_json(j["space"]);
    if (!s.space) throw SchemaError("scenario needs a space (or a preset)");
    if (j.contains("v")) {
        if (s.preset) throw SchemaError("give either preset or v, not both");
        s.v = j["v"];
    } else if (!s.preset) {
        throw SchemaError("scenario needs v (or a preset)");
    }
    if (j.contains("pair")) {
        const auto& p = j["pair"];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
            throw SchemaError("pair must be two simple root indices");
        s.pair = {p[0].get<int>(), p[1].get<int>()};
    }
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) throw SchemaError("checks must be an array");
        s.checks.clear();
        for (const auto& c : j["checks"]) {
            if (!c.is_string()) throw SchemaError("checks must be strings");
            const auto& k = known_checks();
            if (std::find(k.begin(), k.end(), c.get<std::string>()) == k.end())
                throw SchemaError("unknown check '" + c.get<std::string>() + "'");
            s.checks.push_back(c);
        }
        s.checks_given = true;
    }
    if (j.contains("seed")) {
        const auto& x = j["seed"];
        if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0))
            throw SchemaError("seed must be a non-negative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) throw SchemaError("tolerances must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!it.value().is_number() || it.value().get<double>() <= 0) throw SchemaError("tolerances must be positive numbers");
            double x = it.value().get<double>();
            if (it.key() == "cpc") s.tol.cpc_tol = x;
            else if (it.key() == "cluster") s.tol.cluster_tol = x;
            else if (it.key() == "symmetry") s.tol.symmetry_tol = x;
            else throw SchemaError("unknown tolerance '" + it.key() + "'");
        }
    }
    if (j.contains("expect")) {
        if (j["expect"] != "pass" && j["expect"] != "fail") throw SchemaError("expect must be \"pass\" or \"fail\"");
        s.expect_pass = j["expect"] == "pass";
    }
    if (j.contains("expect_transitive")) {
        if (!j["expect_transitive"].is_boolean()) throw SchemaError("expect_transitive must be a boolean");
        s.expect_transitive = j["expect_transitive"].get<bool>();
    }
    if (j.contains("scan")) {
        const auto& t = j["scan"];
        if (!t.is_object()) throw SchemaError("scan must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!it.value().is_number_integer() || it.value().get<int>() < 1) throw SchemaError("scan values must be positive integers");
            int x = it.value().get<int>();
            if (it.key() == "d0") s.scan.d0 = x;
            else if (it.key() == "d1") s.scan.d1 = x;
            else if (it.key() == "trials") s.scan.trials = x;
            else throw SchemaError("unknown scan key '" + it.key() + "'");
        }
    }
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scenario file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

// ---- payloads --------------------------------------------------------------

inline json clusters_json(const Vec<double>& values, double tol) {
    json a = json::array();
    for (const auto& c : cluster_values(values, tol))
        a.push_back({{"value", std::abs(c.value) < tol ? 0.0 : c.value}, {"multiplicity", c.multiplicity}});
    return a;
}

inline json decomposition_json(const Decomposition& d, const SpaceSpec& s) {
    json roots = json::array();
    for (int r = 0; r < d.num_positive(); ++r)
        roots.push_back({{"label", coeffs_label(d.root(r))},
                         {"coeffs", d.root(r)},
                         {"level", d.sys.level(d.root(r))},
                         {"multiplicity", d.pos_idx[r].size()},
                         {"length_sq", d.length_sq(r).get_str()}});
    return {{"space", s.label()},
            {"algebra", d.g().name},
            {"dim", d.dim},
            {"family", to_string(d.sys.family)},
            {"rank", d.sys.rank},
            {"dim_a", d.a_idx.size()},
            {"dim_k0", d.k0_idx.size()},
            {"metric_scale", d.metric_scale.get_str()},
            {"positive_roots", roots}};
}

/// Full root data for the dump verb.
inline json dump_json(const Decomposition& d, const SpaceSpec& s) {
    json j = decomposition_json(d, s);
    json cartan = json::array();
    for (int r = 0; r < d.num_positive(); ++r) {
        json row = json::array();
        for (int i = 0; i < d.sys.rank; ++i) row.push_back(d.sys.cartan_integer(d.sys.simple(i), d.root(r)));
        cartan.push_back(row);
    }
    json gram = json::array();
    for (int r = 0; r < d.num_positive(); ++r) {
        json row = json::array();
        for (int t = 0; t < d.num_positive(); ++t) row.push_back(d.inner(d.h_lambda[r], d.h_lambda[t]).get_str());
        gram.push_back(row);
    }
    j["cartan_integers"] = cartan;   // A_{α_i, λ} per positive root λ
    j["h_lambda_gram"] = gram;
    j["reduced_simple"] = d.sys.reduced_simple;
    j["basis_labels"] = d.g().labels;
    return j;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    json payload;
};

namespace detail {

inline json verdict_json(const CpcVerdict& v, double cluster_tol) {
    return {{"is_cpc", v.is_cpc},
            {"max_spectrum_deviation", v.max_spectrum_deviation},
            {"samples", v.samples},
            {"symmetry_residual", v.symmetry_residual},
            {"reference_spectrum", clusters_json(v.reference_spectrum, cluster_tol)},
            {"witness_directions", {v.witness_directions.first, v.witness_directions.second}}};
}

inline std::optional<std::pair<std::vector<Vec<Rational>>, std::vector<Vec<Rational>>>> pair_parts(
    const Decomposition& d, const VSpec& v, std::pair<int, int> pr) {
    if (v.entries.size() != 2) return std::nullopt;
    int r0 = d.simple_index(pr.first), r1 = d.simple_index(pr.second);
    if (v.entries[0].root == r0 && v.entries[1].root == r1) return std::pair{v.entries[0].basis, v.entries[1].basis};
    if (v.entries[0].root == r1 && v.entries[1].root == r0) return std::pair{v.entries[1].basis, v.entries[0].basis};
    return std::nullopt;
}

}  // namespace detail

struct RunOutcome {
    json report;
    bool pass = false;
};

/// Execute a scenario; InvalidArgument/SchemaError and ConsistencyError propagate.
inline RunOutcome run_scenario(const Scenario& sc) {
    auto t0 = std::chrono::steady_clock::now();
    const SpaceSpec space = *sc.space;
    auto dp = build_decomposition(space);
    const Decomposition& d = *dp;
    if (sc.pair.first < 0 || sc.pair.second < 0 || sc.pair.first >= d.sys.rank || sc.pair.second >= d.sys.rank)
        throw InvalidArgument("pair: simple root index out of range");
    VSpec v = sc.preset ? expand_preset(*sc.preset, d, sc.pair) : vspec_from_json(d, sc.v);
    SamplerConfig cfg;
    cfg.seed = sc.seed;
    cfg.tol = sc.tol;

    std::optional<OrbitModel> orbit;
    auto get_orbit = [&]() -> const OrbitModel& {
        if (!orbit) orbit = build_orbit(dp, v);
        return *orbit;
    };

    // an empty check list still reports the decomposition summary
    const std::vector<std::string> names = sc.checks.empty() ? std::vector<std::string>{"decompose"} : sc.checks;
    std::vector<CheckResult> results;
    for (const auto& name : names) {
        CheckResult c{name, true, json::object()};
        if (name == "decompose") {
            c.payload = decomposition_json(d, space);
        } else if (name == "invariants") {
            json rows = json::array();
            for (const auto& r : identity_battery(d)) {
                rows.push_back({{"identity", r.identity}, {"instances", r.instances}, {"failures", r.failures},
                                {"first_failure", r.first_failure}});
                c.pass &= r.pass();
            }
            c.payload = {{"identities", rows}};
        } else if (name == "sweep") {
            auto verdict = cpc_sweep(get_orbit(), cfg);
            c.pass = verdict.is_cpc == sc.expect_pass;
            c.payload = detail::verdict_json(verdict, cfg.tol.cluster_tol);
            c.payload["expected"] = sc.expect_pass ? "pass" : "fail";
            c.payload["dim_s"] = get_orbit().dim_s();
            c.payload["dim_v"] = get_orbit().dim_v();
        } else if (name == "characterize") {
            auto parts = detail::pair_parts(d, v, sc.pair);
            if (!parts) throw InvalidArgument("characterize needs V = V0 + V1 on the simple pair " +
                                              std::to_string(sc.pair.first) + "," + std::to_string(sc.pair.second));
            auto ch = characterization_check(d, sc.pair.first, sc.pair.second, parts->first, parts->second);
            c.pass = ch.cpc == sc.expect_pass;
            c.payload = {{"cpc", ch.cpc}, {"dim_v0", ch.dim_v0}, {"dim_v1", ch.dim_v1}, {"dim_bracket", ch.dim_bracket},
                         {"expected", sc.expect_pass ? "pass" : "fail"}};
        } else if (name == "blocks") {
            const auto& o = get_orbit();
            ShapeField f(o);
            auto dirs = sweep_directions(o.dim_v(), cfg);
            json blocks = json::array();
            for (int b = 0; b < int(o.partition.size()); ++b) {
                const auto& pb = o.partition[b];
                json roots = json::array();
                for (int r : pb.roots) roots.push_back(coeffs_label(d.root(r)));
                json jb = {{"shape", pb.shape}, {"roots", roots}, {"columns", pb.columns.size()}};
                if (!pb.columns.empty()) {
                    double leak = 0, spread = 0;
                    Vec<double> first;
                    for (const auto& dir : dirs) {
                        auto sb = string_block(o, f.at(dir), b, INFINITY);
                        auto ev = symmetric_eigenvalues(symmetrize(sb.block));
                        leak = std::max(leak, sb.leakage);
                        if (first.empty()) first = ev;
                        spread = std::max(spread, spectrum_distance(ev, first));
                    }
                    bool string_class = pb.shape == "singleton" || pb.shape == "len3" || pb.shape == "len6";
                    if (string_class && leak > 1e-9) c.pass = false;
                    jb["leakage"] = leak;
                    jb["spectrum"] = clusters_json(first, cfg.tol.cluster_tol);
                    jb["variation"] = spread;
                }
                blocks.push_back(jb);
            }
            c.payload = {{"blocks", blocks}};
        } else if (name == "normalizer") {
            auto n = normalizer_check(get_orbit(), sc.seed);
            if (sc.expect_transitive) c.pass = n.transitive_possible == *sc.expect_transitive;
            c.payload = {{"dim_k", n.k_dim},
                         {"dim_tangent_normalizer", n.tangent_normalizer_dim},
                         {"dim_m", n.m_dim},
                         {"refinement_steps", n.refinement_steps},
                         {"orbit_rank_at_xi", n.orbit_rank_at_xi},
                         {"dim_v", n.dim_v},
                         {"transitive_possible", n.transitive_possible}};
            if (n.witness_xi) c.payload["witness_xi"] = detail::rational_vector_json(*n.witness_xi);
        } else if (name == "codim-scan") {
            auto r = codimension_scan(dp, sc.pair.first, sc.pair.second, sc.scan.d0, sc.scan.d1, sc.scan.trials, sc.seed, cfg);
            c.pass = r.mismatches == 0;
            json hist = json::object();
            for (auto [k, n] : r.bracket_dims) hist[std::to_string(k)] = n;
            c.payload = {{"d0", sc.scan.d0}, {"d1", sc.scan.d1}, {"trials", r.trials}, {"algebraic_cpc", r.algebraic_cpc},
                         {"sweep_cpc", r.sweep_cpc}, {"mismatches", r.mismatches}, {"bracket_dims", hist},
                         {"mismatch_trials", r.mismatch_trials}};
        } else {
            throw SchemaError("unknown check '" + name + "'");
        }
        results.push_back(std::move(c));
    }

    RunOutcome out;
    out.pass = std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.pass; });
    json checks = json::array();
    for (const auto& c : results) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"payload", c.payload}});
    json scen = {{"name", sc.name},
                 {"space", space.label()},
                 {"preset", sc.preset ? json(*sc.preset) : json(nullptr)},
                 {"pair", {sc.pair.first, sc.pair.second}},
                 {"case_tag", v.case_tag},
                 {"v", vspec_to_json(d, v)},
                 {"checks", names},
                 {"seed", sc.seed},
                 {"tolerances", {{"cpc", sc.tol.cpc_tol}, {"cluster", sc.tol.cluster_tol}, {"symmetry", sc.tol.symmetry_tol}}},
                 {"expect", sc.expect_pass ? "pass" : "fail"}};
    if (sc.expect_transitive) scen["expect_transitive"] = *sc.expect_transitive;
    out.report = {{"schema_version", schema_version},
                  {"artifact_version", artifact_version},
                  {"kind", "run"},
                  {"scenario", scen},
                  {"metric_scale", d.metric_scale.get_str()},
                  {"checks", checks},
                  {"pass", out.pass},
                  {"timing", {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}}}};
    return out;
}

// ---- suites ----------------------------------------------------------------

inline json criterion_json(const CriterionResult& c) {
    json rows = json::array();
    for (const auto& r : c.rows)
        rows.push_back({{"claim", r.claim}, {"expected", r.expected}, {"computed", r.computed}, {"tolerance", r.tolerance},
                        {"pass", r.pass}});
    return {{"id", c.id}, {"title", c.title}, {"pass", c.pass()}, {"rows", rows}, {"note", c.note}};
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> s{"paper-acceptance", "invariants-exhaustive", "scan-nightly"};
    return s;
}

/// Suites report as lists of criteria; the seed replaces the default 42.
inline RunOutcome run_suite(const std::string& name, std::uint64_t seed = 42, std::optional<double> cpc_tol = {}) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CriterionResult> crit;
    AcceptanceOptions opt;
    opt.seed = seed;
    opt.sampler.seed = seed;
    if (cpc_tol) opt.sampler.tol.cpc_tol = *cpc_tol;
    if (name == "paper-acceptance") {
        crit = run_acceptance(opt);
    } else if (name == "invariants-exhaustive") {
        IdentityOptions io;
        io.exhaustive = true;
        io.seed = seed;
        int id = 0;
        for (const auto& s : standard_spaces()) {
            crit.push_back(detail::timed(++id, s.label(), [&](CriterionResult& c) {
                auto d = build_decomposition(s);
                for (const auto& r : identity_battery(*d, io))
                    c.rows.push_back({r.identity, "exact", std::to_string(r.failures) + " failures / " +
                                      std::to_string(r.instances) + " instances" +
                                      (r.first_failure.empty() ? "" : " (" + r.first_failure + ")"), 0, r.pass()});
            }));
        }
    } else if (name == "scan-nightly") {
        crit.push_back(detail::timed(1, "codimension scans, sl3(H)", [&](CriterionResult& c) {
            auto d = build_decomposition({"sl_quaternion", 3});
            for (auto [k, trials] : std::vector<std::pair<int, int>>{{3, 1000}, {2, 500}, {1, 200}}) {
                auto r = codimension_scan(d, 0, 1, k, k, trials, derive_seed(seed, k), opt.sampler);
                c.rows.push_back({"dim V0 = dim V1 = " + std::to_string(k) + ": mismatches", "0",
                                  std::to_string(r.mismatches) + " (" + std::to_string(r.algebraic_cpc) + " CPC of " +
                                      std::to_string(r.trials) + ")",
                                  0, r.mismatches == 0 && (k != 3 || r.algebraic_cpc == 0)});
            }
        }));
        crit.push_back(detail::timed(2, "equivalence scans", [&](CriterionResult& c) {
            int k = 0;
            for (const auto& s : standard_spaces()) {
                if (s.n != 3 || s.family.rfind("sl_", 0) != 0) continue;
                auto r = equivalence_scan(build_decomposition(s), 0, 1, 500, derive_seed(seed, 100 + k++), opt.sampler);
                c.rows.push_back({s.label() + ": mismatches", "0",
                                  std::to_string(r.mismatches) + " (" + std::to_string(r.algebraic_cpc) + " CPC of " +
                                      std::to_string(r.trials) + ")",
                                  0, r.mismatches == 0});
            }
        }));
    } else {
        throw SchemaError("unknown suite '" + name + "'");
    }
    RunOutcome out;
    out.pass = std::all_of(crit.begin(), crit.end(), [](const CriterionResult& c) { return c.pass(); });
    json cj = json::array(), timing = json::object();
    for (const auto& c : crit) {
        cj.push_back(criterion_json(c));
        timing[std::to_string(c.id)] = c.seconds;
    }
    timing["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.report = {{"schema_version", schema_version}, {"artifact_version", artifact_version}, {"kind", "suite"},
                  {"suite", name}, {"seed", seed}, {"criteria", cj}, {"pass", out.pass}, {"timing", timing}};
    return out;
}

// ---- text tables -----------------------------------------------------------

inline std::string format_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> w;
    auto width = [](const std::string& s) {
        std::size_t n = 0;
        for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
        return n;
    };
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (w.size() <= i) w.push_back(0);
            w[i] = std::max(w[i], width(r[i]));
        }
    std::ostringstream os;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            os << r[i];
            if (i + 1 < r.size()) os << std::string(w[i] - width(r[i]) + 2, ' ');
        }
        os << "\n";
    }
    return os.str();
}

inline std::string suite_table(const json& report) {
    std::vector<std::vector<std::string>> rows{{"#", "claim", "expected", "computed", "tol", "verdict"}};
    std::ostringstream notes;
    for (const auto& c : report["criteria"]) {
        std::string id = std::to_string(c["id"].get<int>());
        rows.push_back({id, c["title"].get<std::string>(), "", "", "", c["pass"].get<bool>() ? "PASS" : "FAIL"});
        for (const auto& r : c["rows"]) {
            double t = r["tolerance"];
            rows.push_back({"", "  " + r["claim"].get<std::string>(), r["expected"], r["computed"],
                            t == 0 ? "exact" : detail::sci(t), r["pass"].get<bool>() ? "pass" : "fail"});
        }
        if (!c["note"].get<std::string>().empty()) notes << "[" << id << "] " << c["note"].get<std::string>() << "\n";
    }
    return format_table(rows) + (notes.str().empty() ? "" : "\n" + notes.str()) +
           "\nsuite " + report["suite"].get<std::string>() + ": " + (report["pass"].get<bool>() ? "PASS" : "FAIL") + "\n";
}

inline std::string run_table(const json& report) {
    const auto& s = report["scenario"];
    std::ostringstream os;
    os << "scenario " << s["name"].get<std::string>() << " on " << s["space"].get<std::string>() << " (case "
       << s["case_tag"].get<std::string>() << ", expect " << s["expect"].get<std::string>() << ", seed "
       << s["seed"].get<std::uint64_t>() << ")\n";
    os << "metric_scale " << report["metric_scale"].get<std::string>() << "\n\n";
    std::vector<std::vector<std::string>> rows{{"check", "verdict", "summary"}};
    for (const auto& c : report["checks"]) {
        const auto& p = c["payload"];
        std::string name = c["name"], sum;
        if (name == "decompose") {
            sum = p["family"].get<std::string>() + std::to_string(p["rank"].get<int>()) + ", dim " +
                  std::to_string(p["dim"].get<int>()) + ", dim k0 " + std::to_string(p["dim_k0"].get<int>()) + ", mult";
            for (const auto& r : p["positive_roots"]) sum += " " + std::to_string(r["multiplicity"].get<int>());
        } else if (name == "sweep") {
            sum = std::string(p["is_cpc"].get<bool>() ? "CPC" : "not CPC") + ", deviation " +
                  detail::sci(p["max_spectrum_deviation"]) + ", spectrum {";
            bool first = true;
            for (const auto& q : p["reference_spectrum"]) {
                sum += (first ? "" : ", ") + detail::num(q["value"]) +
                       (q["multiplicity"].get<int>() > 1 ? " x" + std::to_string(q["multiplicity"].get<int>()) : "");
                first = false;
            }
            sum += "}";
        } else if (name == "characterize") {
            sum = "dim V0 " + std::to_string(p["dim_v0"].get<int>()) + ", dim V1 " + std::to_string(p["dim_v1"].get<int>()) +
                  ", dim [V0,V1] " + std::to_string(p["dim_bracket"].get<int>()) + (p["cpc"].get<bool>() ? ": CPC" : ": not CPC");
        } else if (name == "blocks") {
            for (const auto& b : p["blocks"]) sum += (sum.empty() ? "" : ", ") + b["shape"].get<std::string>() + "/" +
                                                     std::to_string(b["columns"].get<int>());
        } else if (name == "normalizer") {
            sum = "dim m " + std::to_string(p["dim_m"].get<int>()) + ", transitive_possible " +
                  (p["transitive_possible"].get<bool>() ? "true" : "false");
        } else if (name == "codim-scan") {
            sum = std::to_string(p["trials"].get<int>()) + " trials, " + std::to_string(p["algebraic_cpc"].get<int>()) +
                  " CPC, " + std::to_string(p["mismatches"].get<int>()) + " mismatches";
        } else if (name == "invariants") {
            long f = 0;
            for (const auto& r : p["identities"]) f += r["failures"].get<long>();
            sum = std::to_string(p["identities"].size()) + " identities, " + std::to_string(f) + " failures";
        }
        rows.push_back({name, c["pass"].get<bool>() ? "pass" : "FAIL", sum});
    }
    os << format_table(rows) << "\n" << (report["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

inline std::string dump_table(const json& j) {
    std::ostringstream os;
    os << j["space"].get<std::string>() << ": " << j["family"].get<std::string>() << j["rank"].get<int>() << ", dim "
       << j["dim"].get<int>() << ", dim a " << j["dim_a"].get<int>() << ", dim k0 " << j["dim_k0"].get<int>()
       << ", metric_scale " << j["metric_scale"].get<std::string>() << "\n\n";
    bool full = j.contains("cartan_integers");
    std::vector<std::vector<std::string>> rows{{"root", "level", "mult", "|root|^2"}};
    if (full) rows[0].push_back("A(a_i, root)");
    for (std::size_t r = 0; r < j["positive_roots"].size(); ++r) {
        const auto& x = j["positive_roots"][r];
        rows.push_back({x["label"], std::to_string(x["level"].get<int>()), std::to_string(x["multiplicity"].get<int>()),
                        x["length_sq"]});
        if (full) {
            std::string a;
            for (const auto& v : j["cartan_integers"][r]) a += (a.empty() ? "" : " ") + std::to_string(v.get<int>());
            rows.back().push_back(a);
        }
    }
    os << format_table(rows);
    if (!full) return os.str();
    os << "\nGram matrix of H_lambda:\n";
    std::vector<std::vector<std::string>> g;
    for (const auto& row : j["h_lambda_gram"]) {
        std::vector<std::string> r;
        for (const auto& v : row) r.push_back(v);
        g.push_back(r);
    }
    os << format_table(g);
    return os.str();
}

}  // namespace cpc
