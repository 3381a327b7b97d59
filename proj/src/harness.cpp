#include "ncc/harness.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "ncc/datagen.hpp"
#include "ncc/estimators.hpp"
#include "ncc/rng.hpp"

namespace ncc {

std::string_view to_string(Hypothesis h) { return h == Hypothesis::null ? "null" : "alternative"; }

Hypothesis parse_hypothesis(std::string_view s) {
    if (s == "null") return Hypothesis::null;
    if (s == "alternative") return Hypothesis::alternative;
    throw ValidationError("unknown hypothesis '" + std::string(s) + "'");
}

std::string_view to_string(Statistic s) {
    switch (s) {
        case Statistic::marginal_bias: return "marginal_bias";
        case Statistic::conditional_bias: return "conditional_bias";
        case Statistic::marginal_rmse: return "marginal_rmse";
        case Statistic::conditional_rmse: return "conditional_rmse";
        case Statistic::marginal_rejection_rate: return "marginal_rejection_rate";
        case Statistic::conditional_rejection_rate: return "conditional_rejection_rate";
        case Statistic::continuation_frequency: return "continuation_frequency";
    }
    return "?";
}

std::uint64_t Scenario::key() const {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : id) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

const Scenario& validate(const Scenario& s) {
    validate(s.design);
    if (s.replicates < 1) throw ValidationError("replicates must be at least 1");
    if (s.bootstrap_b < 0) throw ValidationError("bootstrap_b must be non-negative");
    if (s.id.empty()) throw ValidationError("scenario id must not be empty");
    return s;
}

std::uint64_t replicate_seed(const Scenario& scenario, std::uint64_t master_seed, std::int64_t replicate) {
    return rng::derive_seed(master_seed, scenario.key(), replicate);
}

ReplicateResult run_replicate(const Scenario& scenario, std::uint64_t master_seed, std::int64_t replicate) {
    ReplicateResult out;
    out.theta1.fill(std::numeric_limits<double>::quiet_NaN());
    try {
        const auto& design = scenario.design;
        const auto seed = replicate_seed(scenario, master_seed, replicate);
        const auto period1 = simulate_period1(design, seed);
        const auto interim = interim_z(period1.summary(), design);
        const auto data = complete_period2(period1, design, seed, interim.continued);

        out.continued = interim.continued;
        out.z11 = interim.z11;
        if (interim.continued)
            for (Theta1Method m : kTheta1Methods)
                out.theta1[int(m)] = theta1::estimate(m, data.summary(), design, interim);

        std::optional<BootstrapSettings> boot;
        if (scenario.bootstrap_b > 0 && interim.continued)
            boot = BootstrapSettings{scenario.bootstrap_b,
                                     rng::derive_seed(master_seed, scenario.key(), replicate, rng::kBootstrap)};
        out.records = analyze_trial(data, design, interim, boot);
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

std::vector<ReplicateResult> run_replicates(const Scenario& scenario, std::uint64_t master_seed, int workers) {
    validate(scenario);
    std::vector<ReplicateResult> results(scenario.replicates);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < scenario.replicates; i = next++) results[i] = run_replicate(scenario, master_seed, i);
    };
    const int n = std::max(1, std::min(workers, scenario.replicates));
    if (n == 1) {
        work();
        return results;
    }
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    pool.clear();
    return results;
}

namespace {

// Running sums in replicate order.
struct Moments {
    long n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        ++n;
        sum += x;
        sum_sq += x * x;
    }
    double mean() const { return sum / double(n); }
    double sd() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, (sum_sq - double(n) * m * m) / double(n - 1)));
    }
};

Estimate mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return {};
    Moments m;
    for (double x : xs) m.add(x);
    return {m.mean(), m.sd() / std::sqrt(double(m.n))};
}

Estimate rmse_of(const std::vector<double>& errors) {
    if (errors.empty()) return {};
    Moments sq;
    for (double e : errors) sq.add(e * e);
    const double rmse = std::sqrt(sq.mean());
    const double se_mse = sq.sd() / std::sqrt(double(sq.n));
    return {rmse, rmse > 0.0 ? se_mse / (2.0 * rmse) : 0.0};
}

Estimate rate_of(long hits, long n) {
    if (n == 0) return {};
    const double p = double(hits) / double(n);
    return {p, std::sqrt(p * (1.0 - p) / double(n))};
}

}  // namespace

OperatingCharacteristics summarize(const Scenario& scenario, const std::vector<ReplicateResult>& replicates) {
    OperatingCharacteristics oc;
    oc.scenario = scenario;
    oc.n_replicates = int(replicates.size());

    long ok = 0;
    for (const auto& r : replicates) {
        if (r.failed) {
            ++oc.n_failed;
            continue;
        }
        ++ok;
        oc.n_continuing += r.continued;
    }
    oc.valid = oc.n_failed * 100 <= oc.n_replicates;

    const double theta2 = scenario.design.theta2;
    for (int mi = 0; mi < kNumMethods; ++mi) {
        std::vector<double> err_all, err_cond;
        long tested_all = 0, rej_all = 0, tested_cond = 0, rej_cond = 0;
        bool all_tested = true;
        for (const auto& r : replicates) {
            if (r.failed) continue;
            const auto& rec = r.records[mi];
            const double e = rec.estimate - theta2;
            err_all.push_back(e);
            if (r.continued) err_cond.push_back(e);
            if (!rec.tested()) {
                all_tested = false;
                continue;
            }
            ++tested_all;
            rej_all += rec.rejected;
            if (r.continued) {
                ++tested_cond;
                rej_cond += rec.rejected;
            }
        }
        auto& mc = oc.methods[mi];
        mc.method = kAllMethods[mi];
        mc.stats[int(Statistic::marginal_bias)] = mean_of(err_all);
        mc.stats[int(Statistic::conditional_bias)] = mean_of(err_cond);
        mc.stats[int(Statistic::marginal_rmse)] = rmse_of(err_all);
        mc.stats[int(Statistic::conditional_rmse)] = rmse_of(err_cond);
        if (all_tested) mc.stats[int(Statistic::marginal_rejection_rate)] = rate_of(rej_all, tested_all);
        if (all_tested) mc.stats[int(Statistic::conditional_rejection_rate)] = rate_of(rej_cond, tested_cond);
        mc.stats[int(Statistic::continuation_frequency)] = rate_of(oc.n_continuing, ok);
    }
    return oc;
}

OperatingCharacteristics run_scenario(const Scenario& scenario, std::uint64_t master_seed, int workers) {
    return summarize(scenario, run_replicates(scenario, master_seed, workers));
}

namespace {

struct Level {
    double value;
    const char* label;
};

constexpr Level kAlpha1[] = {{0.1, "0.1"},   {0.15, "0.15"}, {0.2, "0.2"},   {0.25, "0.25"}, {0.35, "0.35"},
                             {0.5, "0.5"},   {0.65, "0.65"}, {0.75, "0.75"}, {0.95, "0.95"}};
constexpr Level kRatios[] = {{1.0 / 15, "1/15"}, {1.0 / 3, "1/3"}, {1, "1"}, {2, "2"},
                             {4, "4"},           {7, "7"},         {10, "10"}};
constexpr Level kLambda[] = {{-0.15, "-0.15"}, {-0.075, "-0.075"}, {0, "0"}, {0.075, "0.075"}, {0.15, "0.15"}};

constexpr int kPeriod2Size = 150;

int scaled(double ratio) { return int(std::lround(ratio * kPeriod2Size)); }

}  // namespace

std::vector<Scenario> scenario_grid(Hypothesis hypothesis, const GridOptions& options) {
    DesignConfig base;
    base.theta2 = hypothesis == Hypothesis::alternative ? kAlternativeTheta2 : 0.0;
    const std::string prefix = std::string(to_string(hypothesis)) + "/";

    std::vector<Scenario> out;
    auto push = [&](std::string id, const DesignConfig& d) {
        out.push_back({prefix + id, d, hypothesis, options.replicates, options.bootstrap_b});
    };
    for (auto [v, label] : kAlpha1) {
        auto d = base;
        d.alpha1 = v;
        push(std::string("alpha1=") + label, d);
    }
    for (auto [v, label] : kRatios) {
        auto d = base;
        d.n01 = d.n11 = scaled(v);
        push(std::string("r=") + label, d);
    }
    for (auto [v, label] : kRatios) {
        auto d = base;
        d.n11 = d.n12 = scaled(v);
        push(std::string("a=") + label, d);
    }
    for (auto [v, label] : kLambda) {
        auto d = base;
        d.trend = {options.lambda_pattern, v};
        push(std::string("lambda=") + label, d);
    }
    return out;
}

std::vector<Scenario> table1_grid(const GridOptions& options) {
    auto out = scenario_grid(Hypothesis::null, options);
    auto alt = scenario_grid(Hypothesis::alternative, options);
    out.insert(out.end(), alt.begin(), alt.end());
    return out;
}

}  // namespace ncc
