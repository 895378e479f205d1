#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "../tools/cli.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = tdho::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "tdho_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("state prints the harmonic ground state") {
    const Run r = run({"state", "--frame", "to", "--kind", "number", "-n", "0", "--time", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("x,re,im,abs2\n", 0) == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1025);
    const auto& mid = rows[512];
    CHECK(mid[0] == 0.0);
    CHECK_THAT(mid[1], WithinAbs(std::pow(std::numbers::pi, -0.25), 1e-14));
    CHECK_THAT(mid[2], WithinAbs(0.0, 1e-14));
}

TEST_CASE("timemap reproduces the damped closed form") {
    const Run r = run({"timemap", "--preset", "caldirola-kanai", "--t-end", "2", "--samples", "3"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == 1.0);
    CHECK_THAT(rows[1][1], WithinAbs(1.0 - std::exp(-1.0), 1e-12));
}

TEST_CASE("solve columns hold the Wronskian") {
    const Run r = run({"solve", "--preset", "modulated", "--samples", "11"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("tprime,re_xi,im_xi,re_xi_dot,im_xi_dot,theta,phi3,phi3_dot,wronskian_residual", 0) == 0);
    for (const auto& row : csv_rows(r.out)) {
        REQUIRE(row.size() == 9);
        CHECK(row[8] < 1e-9);
        CHECK_THAT(row[6], WithinAbs(2.0 * (row[1] * row[1] + row[2] * row[2]), 1e-12 * row[6]));
    }
}

TEST_CASE("verify passes on every preset") {
    for (const char* preset : {"harmonic", "free", "modulated", "caldirola-kanai"}) {
        INFO(preset);
        const Run r = run({"verify", "--preset", preset});
        CHECK(r.code == 0);
        const json rep = json::parse(r.out);
        CHECK(rep["summary"]["pass"].get<bool>());
        CHECK(rep["summary"]["failed"].empty());
        CHECK(rep["summary"]["total"].get<int>() > 100);
    }
}

TEST_CASE("a too coarse grid fails verify with the accuracy code") {
    const Run r = run({"verify", "--preset", "modulated", "--grid", "65"});
    CHECK(r.code == 3);
    CHECK_FALSE(json::parse(r.out)["summary"]["pass"].get<bool>());
}

TEST_CASE("validation errors exit with code 2") {
    const Run bad = run({"state", "--kind", "number", "-n", "-1"});
    CHECK(bad.code == 2);
    const Run spec = run({"solve", "--spec-json", R"({"h2": {"family": "constant", "params": {"value": "x"}}})"});
    CHECK(spec.code == 2);
    const Run fmt = run({"state", "--format", "xml"});
    CHECK(fmt.code == 2);
    CHECK_THAT(fmt.err, ContainsSubstring("RunConfig.format"));
}

TEST_CASE("usage errors exit with code 64") {
    CHECK(run({}).code == 64);
    CHECK(run({"nonsense"}).code == 64);
    CHECK(run({"state", "--no-such-flag"}).code == 64);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args = {"state", "--preset", "modulated", "--frame", "to", "--kind", "squeezed",
                                           "-r", "0.4", "--theta", "1", "--time", "2.5", "--format", "json"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const json j = json::parse(a.out);
    CHECK(j["x"].size() == j["re"].size());
    CHECK(j["Q"].get<double>() > 0.0);
    CHECK(j.contains("spec_hash"));
}

TEST_CASE("config file values yield to the command line") {
    const auto dir = scratch_dir();
    const auto cfg = dir / "run.json";
    std::ofstream(cfg) << R"({"preset": "caldirola-kanai", "samples": 5, "t-end": 2})";
    const Run r = run({"timemap", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    CHECK(csv_rows(r.out).size() == 5);
    const Run o = run({"timemap", "--config", cfg.string(), "--samples", "3"});
    REQUIRE(o.code == 0);
    CHECK(csv_rows(o.out).size() == 3);
}

TEST_CASE("propagate writes a report") {
    const auto dir = scratch_dir();
    const auto report = dir / "report.json";
    const Run r = run({"propagate", "--preset", "harmonic", "--kind", "coherent", "--x0", "1", "--grid", "1024",
                       "--dt", "1e-3", "--t-final", "1", "--report", report.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(report);
    const json rep = json::parse(in);
    CHECK(rep["steps"].get<int>() == 1000);
    CHECK(rep["l2_raw"].get<double>() < 1e-4);
    CHECK(rep["norm_drift"].get<double>() < 1e-8);
}

TEST_CASE("the installed binary maps exit codes") {
    const char* exe = std::getenv("TDHO_CLI");
    if (exe == nullptr) SKIP("TDHO_CLI not set");
    auto status = [&](const std::string& args) {
        const int raw = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("state --time 0") == 0);
    CHECK(status("state -n -3") == 2);
    CHECK(status("bogus") == 64);
}
