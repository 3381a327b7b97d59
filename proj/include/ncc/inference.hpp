#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "ncc/datagen.hpp"
#include "ncc/design.hpp"
#include "ncc/estimators.hpp"
#include "ncc/theta1.hpp"

namespace ncc {

/// Arm-2 effect estimators compared by the harness.
struct Method {
    enum class Kind { unadjusted, separate, mae };

    Kind kind = Kind::unadjusted;
    Theta1Method theta1 = Theta1Method::cumvue;  // used only by mae

    static constexpr Method unadjusted() { return {Kind::unadjusted, Theta1Method::cumvue}; }
    static constexpr Method separate() { return {Kind::separate, Theta1Method::cumvue}; }
    static constexpr Method mae(Theta1Method m) { return {Kind::mae, m}; }

    friend constexpr bool operator==(Method a, Method b) {
        return a.kind == b.kind && (a.kind != Kind::mae || a.theta1 == b.theta1);
    }
};

inline constexpr int kNumMethods = 6;
inline constexpr std::array<Method, kNumMethods> kAllMethods = {
    Method::unadjusted(),
    Method::separate(),
    Method::mae(Theta1Method::pooled),
    Method::mae(Theta1Method::period1),
    Method::mae(Theta1Method::period2),
    Method::mae(Theta1Method::cumvue)};

int method_index(Method m);
/// "unadjusted", "separate", "mae_pooled", "mae_period1", "mae_period2", "mae_cumvue".
std::string to_string(Method m);
Method parse_method(const std::string& s);

struct BootstrapSettings {
    int b = 1000;  // accepted resamples
    std::uint64_t seed = 0;
};

class BootstrapError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct BiasCorrection {
    double value = 0.0;
    bool capped = false;
};

/// Estimated conditional bias rho se1 phi(g) / (1 - Phi(g)) with
/// g = c1 - theta1_hat / se1. When 1 - Phi(g) < 1e-12 the correction is
/// limited to 10 rho se1 and flagged as capped.
BiasCorrection conditional_bias_estimate(double theta1_hat, const DesignConfig& config);

struct MaeEstimate {
    double estimate = 0.0;
    BiasCorrection correction;
};

/// Mean-adjusted estimate: the separate estimate if Arm 1 stopped, otherwise
/// the model-based estimate minus the estimated conditional bias.
MaeEstimate mae(const CellSummary& cells, const DesignConfig& config, const InterimResult& interim,
                Theta1Method method);

/// Conditional bootstrap variance of the MAE for every Theta1Method, indexed
/// by the enum value. Cells are resampled with replacement per arm and
/// period; resamples whose interim statistic falls below c1 are discarded
/// until `settings.b` have been accepted. Divisor B.
std::array<double, 4> bootstrap_variances(const TrialDataset& data, const DesignConfig& config,
                                          const BootstrapSettings& settings);

double bootstrap_variance(const TrialDataset& data, const DesignConfig& config,
                          const BootstrapSettings& settings, Theta1Method method);

struct EstimateRecord {
    Method method;
    double estimate = 0.0;
    std::optional<double> variance;  // absent when no test was run
    double t_statistic = 0.0;
    bool rejected = false;
    bool continued = false;
    double bias_correction = 0.0;
    bool correction_capped = false;

    bool tested() const { return variance.has_value(); }
};

/// Wald-type test of H0: theta2 = 0 against theta2 > 0 for one method.
EstimateRecord wald_test(const TrialDataset& data, const DesignConfig& config, const InterimResult& interim,
                         Method method, const BootstrapSettings& settings);

/// Records for all six methods. One bootstrap run (when `bootstrap` is set
/// and Arm 1 continued) is shared by the four MAE variants; without it the
/// continued MAE records carry no variance and are not tested.
std::array<EstimateRecord, kNumMethods> analyze_trial(const TrialDataset& data, const DesignConfig& config,
                                                      const InterimResult& interim,
                                                      const std::optional<BootstrapSettings>& bootstrap);

}  // namespace ncc
