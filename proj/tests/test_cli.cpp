#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "cpc/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out;
};

Result cli(const std::string& args) {
    std::string cmd = std::string(CPC_BINARY) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    Result r{-1, ""};
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path temp_file(const std::string& name, const std::string& content) {
    auto dir = fs::temp_directory_path() / ("cpc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto p = dir / name;
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli("").status, 2);
    EXPECT_EQ(cli("frobnicate").status, 2);
    EXPECT_EQ(cli("run").status, 2);
    EXPECT_EQ(cli("run --preset nope").status, 2);
    EXPECT_EQ(cli("run --preset a2-full --format xml").status, 2);
    EXPECT_EQ(cli("run --preset a2-full --seed -1").status, 2);
    EXPECT_EQ(cli("run --preset a2-full --tol 0").status, 2);
    EXPECT_EQ(cli("run --preset canonical-ext-ii --space 'sp_real(3)'").status, 2);
    EXPECT_EQ(cli("decompose").status, 2);
    EXPECT_EQ(cli("decompose --space 'sl_bogus(3)'").status, 2);
    EXPECT_EQ(cli("suite nightly").status, 2);
    EXPECT_EQ(cli("run --config /nonexistent/file.json").status, 2);
    EXPECT_EQ(cli("--help").status, 0);
}

TEST(Cli, Decompose) {
    auto r = cli("decompose --space 'sl_quaternion(3)' --format json");
    ASSERT_EQ(r.status, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema_version"], cpc::schema_version);
    EXPECT_EQ(j["decomposition"]["dim_k0"], 9);
    EXPECT_EQ(j["decomposition"]["positive_roots"][0]["multiplicity"], 4);
    auto t = cli("decompose --space 'so_pq(2,5)'");
    EXPECT_EQ(t.status, 0);
    EXPECT_NE(t.out.find("B2, dim 21"), std::string::npos);
}

TEST(Cli, Dump) {
    auto r = cli("dump --space 'sp_real(3)' --format json");
    ASSERT_EQ(r.status, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["kind"], "dump");
    EXPECT_EQ(j["decomposition"]["h_lambda_gram"].size(), 9u);
    EXPECT_NE(cli("dump --space 'sl_real(3)'").out.find("Gram matrix"), std::string::npos);
}

TEST(Cli, RunPassAndCheckFailure) {
    EXPECT_EQ(cli("run --preset a2-complex-lines").status, 0);
    EXPECT_EQ(cli("run --preset length-obstruction").status, 0);
    auto cfg = temp_file("inverted.json", R"({"preset": "a2-complex-lines", "expect": "fail"})");
    EXPECT_EQ(cli("run --config " + cfg.string()).status, 1);
    auto bad = temp_file("bad.json", R"({"preset": "a2-complex-lines", "colour": 3})");
    EXPECT_EQ(cli("run --config " + bad.string()).status, 2);
    auto broken = temp_file("broken.json", R"({"preset": )");
    EXPECT_EQ(cli("run --config " + broken.string()).status, 2);
}

TEST(Cli, OutFileAndDeterminism) {
    auto dir = temp_file("x", "").parent_path();
    auto a = dir / "a.json", b = dir / "b.json";
    ASSERT_EQ(cli("run --preset orthogonal-roots --seed 11 --format json --out " + a.string()).status, 0);
    ASSERT_EQ(cli("run --preset orthogonal-roots --seed 11 --format json --out " + b.string()).status, 0);
    auto ja = nlohmann::json::parse(std::ifstream(a)), jb = nlohmann::json::parse(std::ifstream(b));
    EXPECT_EQ(ja["scenario"]["seed"], 11);
    ja.erase("timing");
    jb.erase("timing");
    EXPECT_EQ(ja, jb);
}

TEST(Cli, AcceptanceSuiteReportsFailure) {
    auto r = cli("suite paper-acceptance --format json");
    EXPECT_EQ(r.status, 1);
    auto j = nlohmann::json::parse(r.out);
    int failing = 0;
    for (const auto& c : j["criteria"]) failing += !c["pass"].get<bool>();
    EXPECT_EQ(failing, 1);
}

TEST(Cli, ExitStatusMapping) {
    EXPECT_EQ(cpc::exit_status_of(cpc::ConsistencyError("x", "y")), 3);
    EXPECT_EQ(cpc::exit_status_of(cpc::InvalidArgument("x")), 2);
    EXPECT_EQ(cpc::exit_status_of(cpc::SchemaError("x")), 2);
    EXPECT_EQ(cpc::exit_status_of(std::runtime_error("x")), 3);
    try {
        auto j = nlohmann::json::parse("{");
        ADD_FAILURE() << j.dump();
    } catch (const nlohmann::json::exception& e) {
        EXPECT_EQ(cpc::exit_status_of(e), 2);
    }
}
