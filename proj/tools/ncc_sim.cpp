// ncc_sim: simulate operating characteristics, evaluate closed-form bias
// grids, or trace a single simulated trial.

#include <algorithm>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ncc/cli.hpp"

namespace {

using namespace ncc;

int run_simulate(cli::RunConfig flags) {
    if (flags.scenario_file.empty()) throw cli::ConfigError("simulate needs --config");
    const auto plan = cli::parse_config(flags.scenario_file, flags);
    std::vector<OperatingCharacteristics> results;
    for (const auto& s : plan.scenarios) {
        std::cerr << "running " << s.id << " (" << s.replicates << " replicates, B=" << s.bootstrap_b << ")\n";
        results.push_back(run_scenario(s, *plan.config.seed, *plan.config.workers));
        if (!results.back().valid)
            std::cerr << "warning: scenario " << s.id << " invalid (" << results.back().n_failed
                      << " failed replicates)\n";
    }
    cli::emit_results(results, plan.config.out_dir);
    std::cerr << "wrote " << (plan.config.out_dir / "results.csv").string() << "\n";
    return 0;
}

int run_analytic(const std::filesystem::path& out_dir, double theta1, double sigma) {
    auto grid = cli::AnalyticGrid::defaults();
    grid.theta1 = theta1;
    grid.sigma = sigma;
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "analytic.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    cli::write_analytic_csv(out, cli::analytic_rows(grid));
    std::cerr << "wrote " << path.string() << "\n";
    return 0;
}

int run_single(const cli::RunConfig& flags, const std::string& scenario_id, std::int64_t replicate,
               bool write_csv) {
    Scenario scenario{"default", DesignConfig{}, Hypothesis::null, 1, 1000};
    std::uint64_t seed = flags.seed.value_or(0);
    if (!flags.scenario_file.empty()) {
        const auto plan = cli::parse_config(flags.scenario_file, flags);
        seed = *plan.config.seed;
        auto it = std::find_if(plan.scenarios.begin(), plan.scenarios.end(),
                               [&](const Scenario& s) { return scenario_id.empty() || s.id == scenario_id; });
        if (it == plan.scenarios.end()) throw cli::ConfigError("no scenario with id '" + scenario_id + "'");
        scenario = *it;
    } else {
        if (!flags.seed) throw cli::ConfigError("seed is required (--seed)");
        if (flags.bootstrap_b) scenario.bootstrap_b = *flags.bootstrap_b;
    }
    const auto trace = cli::trace_single(scenario, seed, replicate);
    cli::print_trace(std::cout, scenario, trace);
    if (write_csv) {
        std::filesystem::create_directories(flags.out_dir);
        const auto path = flags.out_dir / "trial.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_patients_csv(out, trace.data);
        std::cerr << "wrote " << path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Platform trial simulator with non-concurrent controls and a futility interim"};
    app.require_subcommand(1);

    cli::RunConfig flags;
    std::uint64_t seed = 0;
    int replicates = 0, bootstrap_b = 0, workers = 1;
    std::string out = ".";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Master seed");
        sub->add_option("--bootstrap-b", bootstrap_b, "Accepted bootstrap resamples per trial")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--out", out, "Output directory");
    };

    auto* simulate = app.add_subcommand("simulate", "Run scenarios and write results.csv / results.json");
    std::string config_path;
    simulate->add_option("--config", config_path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    add_common(simulate);
    simulate->add_option("--replicates", replicates, "Replicates per scenario")->check(CLI::PositiveNumber);
    simulate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    auto* analytic = app.add_subcommand("analytic", "Closed-form marginal/conditional bias grids (analytic.csv)");
    double theta1 = 0.0, sigma = 1.0;
    analytic->add_option("--out", out, "Output directory");
    analytic->add_option("--theta1", theta1, "True Arm-1 effect");
    analytic->add_option("--sigma", sigma, "Response standard deviation")->check(CLI::PositiveNumber);

    auto* single = app.add_subcommand("single", "Print the decision trace of one simulated trial");
    std::string scenario_id;
    std::int64_t replicate = 0;
    bool csv = false;
    single->add_option("--config", config_path, "Scenario file (JSON)")->check(CLI::ExistingFile);
    single->add_option("--scenario", scenario_id, "Scenario id (default: first)");
    single->add_option("--replicate", replicate, "Replicate index");
    single->add_flag("--csv", csv, "Also write trial.csv (j,arm,period,y) into --out");
    add_common(single);

    CLI11_PARSE(app, argc, argv);

    auto* active = app.get_subcommands().front();
    auto given = [&](const char* name) {
        const auto* opt = active->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--seed")) flags.seed = seed;
    if (given("--bootstrap-b")) flags.bootstrap_b = bootstrap_b;
    if (simulate->parsed() && simulate->count("--replicates")) flags.replicates = replicates;
    if (simulate->parsed() && simulate->count("--workers")) flags.workers = workers;
    flags.out_dir = out;
    flags.scenario_file = config_path;

    try {
        if (simulate->parsed()) return run_simulate(flags);
        if (analytic->parsed()) return run_analytic(out, theta1, sigma);
        return run_single(flags, scenario_id, replicate, csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
