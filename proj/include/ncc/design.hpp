#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncc {

/// Raised when a design parameter violates its invariant.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

enum class TrendPattern { none, linear, stepwise };

std::string_view to_string(TrendPattern p);
TrendPattern parse_trend_pattern(std::string_view s);

struct TimeTrendSpec {
    TrendPattern pattern = TrendPattern::none;
    double lambda = 0.0;
};

/// Two-period platform trial with a shared control (arm 0), Arm 1 open in
/// both periods and Arm 2 entering at the start of period 2. Arm 1 has a
/// futility interim analysis at the period boundary.
struct DesignConfig {
    int n01 = 150;
    int n11 = 150;
    int n02 = 150;
    int n12 = 150;
    int n22 = 150;
    double alpha1 = 0.5;
    double alpha = 0.025;
    double sigma = 1.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    TimeTrendSpec trend{};

    /// n01 / n02 (== n11 / n12 for Table-1 style designs).
    double period_ratio() const { return double(n01) / double(n02); }
    /// n11 / n01 (== n12 / n02 for Table-1 style designs).
    double allocation_ratio() const { return double(n11) / double(n01); }
    /// Maximum planned sample size, assuming Arm 1 continues.
    int planned_total() const { return n01 + n11 + n02 + n12 + n22; }
};

/// Returns `config` unchanged or throws ValidationError naming the field.
const DesignConfig& validate(const DesignConfig& config);

/// Futility rule for Arm 1: stop if Z11 < c1. alpha1 = 0 and alpha1 = 1
/// are the degenerate always-stop and always-continue rules.
struct FutilityRule {
    enum class Kind { threshold, always_stop, always_continue };

    Kind kind = Kind::threshold;
    double c1 = 0.0;

    static FutilityRule from_alpha1(double alpha1);
    bool continues(double z11) const;
};

/// c1 = Phi^-1(1 - alpha1). Throws std::domain_error for alpha1 outside
/// (0, 1); callers handle the endpoints through FutilityRule.
double critical_value(double alpha1);

/// Weight of the non-concurrent controls in the period-adjusted estimator.
/// Exactly 0 when n12 == 0.
double ncc_weight(int n01, int n02, int n11, int n12);
inline double ncc_weight(const DesignConfig& c) { return ncc_weight(c.n01, c.n02, c.n11, c.n12); }

/// sigma * sqrt(1/n11 + 1/n01), the standard error of the interim difference.
double period1_se(const DesignConfig& c);

}  // namespace ncc
