#include "ncc/inference.hpp"

#include <cmath>
#include <limits>

#include "ncc/normal.hpp"
#include "ncc/rng.hpp"

namespace ncc {

int method_index(Method m) {
    for (int i = 0; i < kNumMethods; ++i)
        if (kAllMethods[i] == m) return i;
    throw std::invalid_argument("unknown method");
}

std::string to_string(Method m) {
    switch (m.kind) {
        case Method::Kind::unadjusted: return "unadjusted";
        case Method::Kind::separate: return "separate";
        case Method::Kind::mae: return "mae_" + std::string(to_string(m.theta1));
    }
    return "?";
}

Method parse_method(const std::string& s) {
    for (Method m : kAllMethods)
        if (to_string(m) == s) return m;
    throw std::invalid_argument("unknown method '" + s + "'");
}

BiasCorrection conditional_bias_estimate(double theta1_hat, const DesignConfig& config) {
    const auto rule = FutilityRule::from_alpha1(config.alpha1);
    const double rho = ncc_weight(config);
    const double se1 = period1_se(config);
    const double gamma = rule.c1 - theta1_hat / se1;
    if (gamma == -std::numeric_limits<double>::infinity()) return {0.0, false};
    if (normal::sf(gamma) >= 1e-12) return {rho * se1 * normal::pdf(gamma) / normal::sf(gamma), false};
    const double cap = 10.0 * rho * se1;
    return {std::min(rho * se1 * normal::upper_mills_ratio(gamma), cap), true};
}

MaeEstimate mae(const CellSummary& cells, const DesignConfig& config, const InterimResult& interim,
                Theta1Method method) {
    if (!interim.continued) return {separate_estimate(cells), {}};
    const double theta1_hat = theta1::estimate(method, cells, config, interim);
    const auto corr = conditional_bias_estimate(theta1_hat, config);
    return {model_based_estimate(cells) - corr.value, corr};
}

namespace {

class CellResampler {
   public:
    explicit CellResampler(const Eigen::VectorXd& y) : y_(y), pick_(0, int(y.size()) - 1) {}

    double mean(rng::Engine& gen) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < y_.size(); ++i) s += y_[pick_(gen)];
        return s / double(y_.size());
    }

   private:
    const Eigen::VectorXd& y_;
    std::uniform_int_distribution<int> pick_;
};

double critical_z(double alpha) { return -normal::quantile(alpha); }

double t_stat(double estimate, double variance) {
    if (variance > 0.0) return estimate / std::sqrt(variance);
    if (estimate == 0.0) return 0.0;
    return estimate > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

EstimateRecord tested(Method m, double estimate, double variance, bool continued, double alpha) {
    EstimateRecord r{m, estimate, variance};
    r.t_statistic = t_stat(estimate, variance);
    r.rejected = r.t_statistic > critical_z(alpha);
    r.continued = continued;
    return r;
}

}  // namespace

std::array<double, 4> bootstrap_variances(const TrialDataset& data, const DesignConfig& config,
                                          const BootstrapSettings& settings) {
    if (settings.b < 1) throw std::invalid_argument("bootstrap needs B >= 1");
    if (data.count(Cell::c12) == 0 || !interim_z(data.summary(), config).continued)
        throw EstimatorError("bootstrap variance requires that Arm 1 continued");

    rng::Engine gen(settings.seed);
    std::array<CellResampler, kNumCells> resamplers = {
        CellResampler(data.responses(Cell::c01)), CellResampler(data.responses(Cell::c11)),
        CellResampler(data.responses(Cell::c02)), CellResampler(data.responses(Cell::c12)),
        CellResampler(data.responses(Cell::c22))};

    const long max_attempts = 100L * settings.b;
    std::array<std::vector<double>, 4> draws;
    for (auto& d : draws) d.reserve(settings.b);

    CellSummary star = data.summary();
    long attempts = 0;
    while (int(draws[0].size()) < settings.b) {
        if (++attempts > max_attempts)
            throw BootstrapError("bootstrap cannot satisfy continuation condition");
        star.mean[int(Cell::c01)] = resamplers[0].mean(gen);
        star.mean[int(Cell::c11)] = resamplers[1].mean(gen);
        const auto interim = interim_z(star, config);
        if (!interim.continued) continue;
        for (int k = 2; k < kNumCells; ++k) star.mean[k] = resamplers[k].mean(gen);
        for (Theta1Method m : kTheta1Methods) draws[int(m)].push_back(mae(star, config, interim, m).estimate);
    }

    std::array<double, 4> var{};
    for (int m = 0; m < 4; ++m) {
        const Eigen::Map<const Eigen::VectorXd> v(draws[m].data(), Eigen::Index(draws[m].size()));
        var[m] = (v.array() - v.mean()).square().sum() / double(settings.b);
    }
    return var;
}

double bootstrap_variance(const TrialDataset& data, const DesignConfig& config,
                          const BootstrapSettings& settings, Theta1Method method) {
    return bootstrap_variances(data, config, settings)[int(method)];
}

std::array<EstimateRecord, kNumMethods> analyze_trial(const TrialDataset& data, const DesignConfig& config,
                                                      const InterimResult& interim,
                                                      const std::optional<BootstrapSettings>& bootstrap) {
    const auto& cells = data.summary();
    const double s2 = config.sigma * config.sigma;
    const double var_separate = s2 * (1.0 / cells.count(Cell::c02) + 1.0 / cells.count(Cell::c22));
    const double sep = separate_estimate(cells);
    std::array<EstimateRecord, kNumMethods> out;

    if (!interim.continued) {
        for (int i = 0; i < kNumMethods; ++i) out[i] = tested(kAllMethods[i], sep, var_separate, false, config.alpha);
        return out;
    }

    out[0] = tested(Method::unadjusted(), model_based_estimate(cells), model_based_variance(cells, config.sigma),
                    true, config.alpha);
    out[1] = tested(Method::separate(), sep, var_separate, true, config.alpha);

    std::optional<std::array<double, 4>> boot;
    if (bootstrap) boot = bootstrap_variances(data, config, *bootstrap);

    for (Theta1Method m : kTheta1Methods) {
        const auto est = mae(cells, config, interim, m);
        const int i = method_index(Method::mae(m));
        if (boot) {
            out[i] = tested(Method::mae(m), est.estimate, (*boot)[int(m)], true, config.alpha);
        } else {
            out[i].method = Method::mae(m);
            out[i].estimate = est.estimate;
            out[i].continued = true;
            out[i].t_statistic = std::numeric_limits<double>::quiet_NaN();
        }
        out[i].bias_correction = est.correction.value;
        out[i].correction_capped = est.correction.capped;
    }
    return out;
}

EstimateRecord wald_test(const TrialDataset& data, const DesignConfig& config, const InterimResult& interim,
                         Method method, const BootstrapSettings& settings) {
    const bool needs_boot = interim.continued && method.kind == Method::Kind::mae;
    return analyze_trial(data, config, interim,
                         needs_boot ? std::optional<BootstrapSettings>(settings) : std::nullopt)[method_index(method)];
}

}  // namespace ncc
