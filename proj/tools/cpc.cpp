// cpc: decompose spaces, run scenarios and suites, dump root data.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cpc/scenario.hpp"

namespace {

struct Common {
    std::string space, preset, config, format = "table", out;
    std::uint64_t seed = 42;
    double tol = 0;
};

void add_common(CLI::App* app, Common& c, bool scenario_flags) {
    app->add_option("--space", c.space, "space, e.g. sl_complex(3), sp_real(3), so_pq(2,5)");
    if (scenario_flags) {
        app->add_option("--preset", c.preset, "named scenario");
        app->add_option("--config", c.config, "scenario JSON file")->check(CLI::ExistingFile);
    }
    app->add_option("--seed", c.seed, "RNG seed");
    app->add_option("--tol", c.tol, "CPC tolerance (spectrum deviation)")->check(CLI::PositiveNumber);
    app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "table"}));
    app->add_option("--out", c.out, "write the report here instead of stdout");
}

void emit(const Common& c, const cpc::json& report, const std::string& table) {
    std::string text = c.format == "json" ? report.dump(2) + "\n" : table;
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw cpc::SchemaError("cannot write '" + c.out + "'");
    f << text;
}

cpc::Scenario scenario_from_flags(const Common& c, bool seed_given, bool tol_given) {
    cpc::Scenario s;
    if (!c.config.empty()) {
        if (!c.preset.empty()) throw cpc::SchemaError("give --preset or --config, not both");
        s = cpc::load_scenario(c.config);
    } else if (!c.preset.empty()) {
        s = cpc::scenario_from_json({{"preset", c.preset}});
    } else {
        throw cpc::SchemaError("run needs --preset or --config");
    }
    if (!c.space.empty()) {
        auto sp = cpc::parse_space(c.space);
        if (s.preset && sp.family != s.space->family)
            throw cpc::SchemaError("preset " + *s.preset + " is defined for " + s.space->family + " spaces, not " + sp.family);
        s.space = sp;
    }
    if (seed_given) s.seed = c.seed;
    if (tol_given) s.tol.cpc_tol = c.tol;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compact-orbit CPC checker"};
    app.require_subcommand(1);
    Common c;

    auto* decompose = app.add_subcommand("decompose", "restricted root decomposition summary");
    add_common(decompose, c, false);
    auto* run = app.add_subcommand("run", "run a scenario (preset or JSON config)");
    add_common(run, c, true);
    auto* suite = app.add_subcommand("suite", "run a named suite");
    std::string suite_name;
    suite->add_option("name", suite_name, "suite name")->required()->check(CLI::IsMember(cpc::suite_names()));
    add_common(suite, c, false);
    auto* dump = app.add_subcommand("dump", "roots, multiplicities, Cartan integers, H_lambda Gram matrix");
    add_common(dump, c, false);
    auto* list = app.add_subcommand("presets", "list presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? cpc::exit_pass : cpc::exit_usage;
    }

    try {
        auto* sub = app.get_subcommands().front();
        bool seed_given = sub->count("--seed") > 0, tol_given = sub->count("--tol") > 0;
        if (sub == list) {
            for (const auto& p : cpc::presets())
                std::cout << p.name << "  " << p.space.label() << "  " << p.description << "\n";
            return cpc::exit_pass;
        }
        if (sub == decompose || sub == dump) {
            if (c.space.empty()) throw cpc::SchemaError(sub->get_name() + " needs --space");
            auto sp = cpc::parse_space(c.space);
            auto d = cpc::build_decomposition(sp);
            auto j = cpc::dump_json(*d, sp);
            if (sub == decompose) {
                j.erase("cartan_integers");
                j.erase("h_lambda_gram");
                j.erase("basis_labels");
            }
            cpc::json report = {{"schema_version", cpc::schema_version}, {"artifact_version", cpc::artifact_version},
                                {"kind", sub->get_name()}, {"decomposition", j}};
            emit(c, report, cpc::dump_table(j));
            return cpc::exit_pass;
        }
        if (sub == run) {
            auto out = cpc::run_scenario(scenario_from_flags(c, seed_given, tol_given));
            emit(c, out.report, cpc::run_table(out.report));
            return out.pass ? cpc::exit_pass : cpc::exit_check_failure;
        }
        if (!c.space.empty()) throw cpc::SchemaError("suites fix their own spaces; drop --space");
        auto out = cpc::run_suite(suite_name, c.seed, tol_given ? std::optional<double>(c.tol) : std::nullopt);
        emit(c, out.report, cpc::suite_table(out.report));
        return out.pass ? cpc::exit_pass : cpc::exit_check_failure;
    } catch (const std::exception& e) {
        int rc = cpc::exit_status_of(e);
        std::cerr << (rc == cpc::exit_usage ? "error: " : "internal consistency error: ") << e.what() << "\n";
        return rc;
    }
}
