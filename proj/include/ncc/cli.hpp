#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ncc/datagen.hpp"
#include "ncc/harness.hpp"

namespace ncc::cli {

class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command = "simulate";
    std::filesystem::path scenario_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicates;   // overrides every scenario
    std::optional<int> bootstrap_b;  // overrides every scenario
    std::optional<int> workers;      // defaults to 1
    std::filesystem::path out_dir = ".";
};

struct RunPlan {
    RunConfig config;  // seed and workers are always set
    std::vector<Scenario> scenarios;
};

/// Parse a JSON scenario document. Flags already present in `flags` win
/// over the file. Unknown keys, a missing seed, and invalid designs are
/// errors.
///
/// Top-level keys: seed, replicates, bootstrap_b, workers, grid ("table1"),
/// lambda_pattern, scenarios (list of objects with id, hypothesis, n01, n11,
/// n02, n12, n22, alpha1, alpha, sigma, theta1, theta2, trend_pattern,
/// lambda, replicates, bootstrap_b).
RunPlan parse_config_text(std::string_view text, const RunConfig& flags);
RunPlan parse_config(const std::filesystem::path& file, RunConfig flags);

/// Column order of results.csv.
extern const std::vector<std::string> kResultColumns;

void write_results_csv(std::ostream& os, const std::vector<OperatingCharacteristics>& results);
void write_results_json(std::ostream& os, const std::vector<OperatingCharacteristics>& results);

/// Writes results.csv and results.json into `out_dir`.
void emit_results(const std::vector<OperatingCharacteristics>& results, const std::filesystem::path& out_dir);

/// Grids for the closed-form bias curves. Panel A varies alpha1 at 150 per
/// cell; panel B varies r = n01/n02 with n02 = n12 = 150; panel C varies
/// a = n11/n01 with n01 = n02 = 150. B and C use alpha1 = 0.5.
struct AnalyticGrid {
    std::vector<double> alpha1;
    std::vector<double> r;
    std::vector<double> a;
    double theta1 = 0.0;
    double sigma = 1.0;

    static AnalyticGrid defaults();
};

struct AnalyticRow {
    char panel;
    double alpha1, r, a, theta1;
    int n01, n11, n02, n12;
    double rho, stop_probability, marginal_bias;
    std::optional<double> conditional_bias;
};

std::vector<AnalyticRow> analytic_rows(const AnalyticGrid& grid);
void write_analytic_csv(std::ostream& os, const std::vector<AnalyticRow>& rows);

/// Full decision path of one replicate.
struct SingleTrace {
    TrialDataset data;
    InterimResult interim;
    double rho = 0.0;
    std::optional<double> model_based;
    double separate = 0.0;
    ReplicateResult result;
};

SingleTrace trace_single(const Scenario& scenario, std::uint64_t master_seed, std::int64_t replicate);
void print_trace(std::ostream& os, const Scenario& scenario, const SingleTrace& trace);

std::string format_double(double x);

}  // namespace ncc::cli
