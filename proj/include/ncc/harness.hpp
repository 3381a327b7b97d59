#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncc/design.hpp"
#include "ncc/inference.hpp"

namespace ncc {

enum class Hypothesis { null, alternative };

std::string_view to_string(Hypothesis h);
Hypothesis parse_hypothesis(std::string_view s);

/// Effect of Arm 2 under the alternative: about 80% power for the separate
/// analysis with 150 patients per arm in period 2.
inline constexpr double kAlternativeTheta2 = 0.32;

struct Scenario {
    std::string id;
    DesignConfig design;
    Hypothesis hypothesis = Hypothesis::null;
    int replicates = 1000;
    int bootstrap_b = 0;  // 0 runs no bootstrap; MAE tests are then skipped

    /// Stream key derived from the id, so reordering scenarios does not
    /// change their results.
    std::uint64_t key() const;
};

const Scenario& validate(const Scenario& s);

/// Outcome of one simulated trial.
struct ReplicateResult {
    bool failed = false;
    std::string error;
    bool continued = false;
    double z11 = 0.0;
    /// Plug-in theta1 estimates indexed by Theta1Method; NaN when stopped.
    std::array<double, 4> theta1{};
    std::array<EstimateRecord, kNumMethods> records{};
};

ReplicateResult run_replicate(const Scenario& scenario, std::uint64_t master_seed, std::int64_t replicate);

/// Seed of the simulated trial for one replicate (also used by `single`).
std::uint64_t replicate_seed(const Scenario& scenario, std::uint64_t master_seed, std::int64_t replicate);

/// All replicates in index order. The result does not depend on `workers`.
std::vector<ReplicateResult> run_replicates(const Scenario& scenario, std::uint64_t master_seed, int workers);

enum class Statistic {
    marginal_bias,
    conditional_bias,
    marginal_rmse,
    conditional_rmse,
    marginal_rejection_rate,
    conditional_rejection_rate,
    continuation_frequency
};
inline constexpr int kNumStatistics = 7;
std::string_view to_string(Statistic s);

/// A Monte Carlo estimate; absent when no replicate qualifies.
struct Estimate {
    std::optional<double> value;
    std::optional<double> mc_se;
};

struct MethodCharacteristics {
    Method method;
    std::array<Estimate, kNumStatistics> stats;

    const Estimate& operator[](Statistic s) const { return stats[int(s)]; }
};

struct OperatingCharacteristics {
    Scenario scenario;
    int n_replicates = 0;
    int n_continuing = 0;
    int n_failed = 0;
    bool valid = true;  // false when more than 1% of replicates failed
    std::array<MethodCharacteristics, kNumMethods> methods;

    const MethodCharacteristics& operator[](Method m) const { return methods[method_index(m)]; }
};

/// Reduce replicates in index order.
OperatingCharacteristics summarize(const Scenario& scenario, const std::vector<ReplicateResult>& replicates);

OperatingCharacteristics run_scenario(const Scenario& scenario, std::uint64_t master_seed, int workers = 1);

struct GridOptions {
    TrendPattern lambda_pattern = TrendPattern::linear;  // pattern for the lambda factor
    int replicates = 1000;
    int bootstrap_b = 0;
};

/// One-factor-at-a-time grid over alpha1, r, a and lambda with the other
/// factors at their defaults (alpha1 = 0.5, r = a = 1, lambda = 0,
/// n02 = n22 = 150). 28 scenarios for one hypothesis.
std::vector<Scenario> scenario_grid(Hypothesis hypothesis, const GridOptions& options = {});

/// Both hypotheses: 56 scenarios.
std::vector<Scenario> table1_grid(const GridOptions& options = {});

}  // namespace ncc
