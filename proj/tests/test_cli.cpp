#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ncc/cli.hpp"

using namespace ncc;

namespace {
std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
}

const char* kTwoScenarios = R"({
  "seed": 5,
  "replicates": 300,
  "scenarios": [
    {"id": "default", "hypothesis": "null", "n01": 150, "n11": 150, "n02": 150, "n12": 150, "n22": 150},
    {"id": "alt", "hypothesis": "alternative", "alpha1": 0.25, "trend_pattern": "stepwise", "lambda": 0.1}
  ]
})";
}  // namespace

TEST_CASE("table1 preset expands to both hypotheses") {
    const auto plan = cli::parse_config_text(R"({"grid": "table1", "seed": 1})", {});
    CHECK(plan.scenarios.size() == 56);
    CHECK(*plan.config.seed == 1);
    CHECK(*plan.config.workers == 1);
}

TEST_CASE("seed is required") {
    CHECK_THROWS_AS(cli::parse_config_text(R"({"grid": "table1"})", {}), cli::ConfigError);
    cli::RunConfig flags;
    flags.seed = 3;
    CHECK(*cli::parse_config_text(R"({"grid": "table1"})", flags).config.seed == 3);
}

TEST_CASE("flag overrides propagate into scenarios") {
    cli::RunConfig flags;
    flags.bootstrap_b = 200;
    flags.replicates = 50;
    const auto plan = cli::parse_config_text(kTwoScenarios, flags);
    REQUIRE(plan.scenarios.size() == 2);
    for (const auto& s : plan.scenarios) {
        CHECK(s.bootstrap_b == 200);
        CHECK(s.replicates == 50);
    }
    CHECK(plan.scenarios[1].design.theta2 == 0.32);
    CHECK(plan.scenarios[1].design.trend.pattern == TrendPattern::stepwise);
}

TEST_CASE("config errors") {
    CHECK_THROWS_WITH_AS(cli::parse_config_text(R"({"grid": "table1", "seed": 1, "colour": 2})", {}),
                         doctest::Contains("unknown key 'colour'"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config_text("{\n \"seed\": 1,\n \"grid\": \n}", {}),
                         doctest::Contains("line 4"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config_text(R"({"seed": 1, "scenarios": [{"id": "x", "sigma": 0}]})", {}),
                         doctest::Contains("sigma must be positive"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config_text(R"({"seed": 1, "scenarios": [{"id": "x", "n13": 4}]})", {}),
                    cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config_text(R"({"seed": 1})", {}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config_text(R"({"seed": 1, "grid": "table9"})", {}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config("/nonexistent/file.json", {}), cli::ConfigError);
}

TEST_CASE("results files: schema, row counts and byte-identical reruns") {
    const auto plan = cli::parse_config_text(kTwoScenarios, {});
    std::vector<OperatingCharacteristics> results;
    for (const auto& s : plan.scenarios) results.push_back(run_scenario(s, *plan.config.seed, 1));

    const auto dir = std::filesystem::temp_directory_path() / "ncc_cli_test";
    std::filesystem::remove_all(dir);
    cli::emit_results(results, dir / "a");
    cli::emit_results(results, dir / "b");
    const auto csv = slurp(dir / "a" / "results.csv");
    CHECK(csv == slurp(dir / "b" / "results.csv"));
    CHECK(slurp(dir / "a" / "results.json") == slurp(dir / "b" / "results.json"));

    // rerun from scratch with another worker count
    std::vector<OperatingCharacteristics> again;
    for (const auto& s : plan.scenarios) again.push_back(run_scenario(s, *plan.config.seed, 3));
    std::ostringstream os;
    cli::write_results_csv(os, again);
    CHECK(os.str() == csv);

    std::stringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(split(line) == cli::kResultColumns);
    std::map<std::pair<std::string, std::string>, int> per_method;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto f = split(line);
        REQUIRE(f.size() == cli::kResultColumns.size());
        ++per_method[{f[0], f[12]}];
        ++rows;
    }
    CHECK(rows == 2 * 6 * 7);
    for (const auto& [key, n] : per_method) CHECK(n == 7);

    const auto json = nlohmann::json::parse(slurp(dir / "a" / "results.json"));
    CHECK(json.size() == std::size_t(rows));
    CHECK(json[0]["scenario_id"] == "default");
    std::filesystem::remove_all(dir);
}

TEST_CASE("analytic grid values") {
    const auto rows = cli::analytic_rows(cli::AnalyticGrid::defaults());
    const cli::AnalyticRow* a_half = nullptr;
    const cli::AnalyticRow* b_one = nullptr;
    const cli::AnalyticRow* c_one = nullptr;
    for (const auto& r : rows) {
        if (r.panel == 'A' && r.alpha1 == 0.5) a_half = &r;
        if (r.panel == 'B' && r.r == 1) b_one = &r;
        if (r.panel == 'C' && r.a == 1) c_one = &r;
        if (r.panel == 'A' && (r.alpha1 == 0.001 || r.alpha1 == 0.999)) CHECK(r.marginal_bias < 2e-3);
    }
    REQUIRE(a_half);
    REQUIRE(b_one);
    REQUIRE(c_one);
    CHECK(a_half->marginal_bias == doctest::Approx(0.011516471649044516).epsilon(1e-12));
    CHECK(*a_half->conditional_bias == doctest::Approx(0.023032943298089032).epsilon(1e-12));
    CHECK(b_one->marginal_bias == c_one->marginal_bias);
    CHECK(*b_one->conditional_bias == *c_one->conditional_bias);

    std::ostringstream os;
    cli::write_analytic_csv(os, rows);
    const auto text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == long(rows.size()) + 1);
}

TEST_CASE("single trace is consistent with run_replicate") {
    Scenario s{"trace", DesignConfig{}, Hypothesis::null, 1, 100};
    for (std::int64_t rep = 0; rep < 6; ++rep) {
        const auto t = cli::trace_single(s, 8, rep);
        const auto r = run_replicate(s, 8, rep);
        CHECK(t.interim.continued == r.continued);
        CHECK(t.interim.z11 == r.z11);
        CHECK(t.separate == r.records[1].estimate);
        if (t.model_based) CHECK(*t.model_based == r.records[0].estimate);
        for (int i = 0; i < kNumMethods; ++i) CHECK(t.result.records[i].t_statistic == r.records[i].t_statistic);
        std::ostringstream os;
        cli::print_trace(os, s, t);
        CHECK(os.str().find("decision ") != std::string::npos);
        CHECK(os.str().find("mae_cumvue") != std::string::npos);
    }
}
