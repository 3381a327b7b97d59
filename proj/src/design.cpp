#include "ncc/design.hpp"

#include <cmath>
#include <limits>

#include "ncc/normal.hpp"

namespace ncc {

std::string_view to_string(TrendPattern p) {
    switch (p) {
        case TrendPattern::none: return "none";
        case TrendPattern::linear: return "linear";
        case TrendPattern::stepwise: return "stepwise";
    }
    return "none";
}

TrendPattern parse_trend_pattern(std::string_view s) {
    if (s == "none") return TrendPattern::none;
    if (s == "linear") return TrendPattern::linear;
    if (s == "stepwise") return TrendPattern::stepwise;
    throw ValidationError("unknown trend pattern '" + std::string(s) + "'");
}

const DesignConfig& validate(const DesignConfig& c) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ValidationError(msg);
    };
    require(c.n01 >= 1, "n01 must be at least 1");
    require(c.n11 >= 1, "n11 must be at least 1");
    require(c.n02 >= 1, "n02 must be at least 1");
    require(c.n12 >= 0, "n12 must be non-negative");
    require(c.n22 >= 1, "n22 must be at least 1");
    require(c.alpha1 >= 0.0 && c.alpha1 <= 1.0, "alpha1 out of range");
    require(c.alpha > 0.0 && c.alpha < 1.0, "alpha out of range");
    require(c.sigma > 0.0 && std::isfinite(c.sigma), "sigma must be positive");
    require(std::isfinite(c.theta1), "theta1 must be finite");
    require(std::isfinite(c.theta2), "theta2 must be finite");
    require(std::isfinite(c.trend.lambda), "lambda must be finite");
    require(!(c.trend.pattern == TrendPattern::linear && c.planned_total() < 2),
            "linear trend needs at least two patients");
    return c;
}

double critical_value(double alpha1) {
    if (!(alpha1 > 0.0 && alpha1 < 1.0))
        throw std::domain_error("critical_value: alpha1 must lie in (0, 1); 0 and 1 are degenerate rules");
    if (alpha1 == 0.5) return 0.0;
    // Phi^-1(1 - a) = -Phi^-1(a) keeps precision for small alpha1.
    return -normal::quantile(alpha1);
}

FutilityRule FutilityRule::from_alpha1(double alpha1) {
    if (alpha1 <= 0.0) return {Kind::always_stop, std::numeric_limits<double>::infinity()};
    if (alpha1 >= 1.0) return {Kind::always_continue, -std::numeric_limits<double>::infinity()};
    return {Kind::threshold, critical_value(alpha1)};
}

bool FutilityRule::continues(double z11) const {
    switch (kind) {
        case Kind::always_stop: return false;
        case Kind::always_continue: return true;
        case Kind::threshold: return z11 >= c1;
    }
    return false;
}

double ncc_weight(int n01, int n02, int n11, int n12) {
    if (n12 == 0) return 0.0;
    const double inv02 = 1.0 / n02;
    return inv02 / (1.0 / n01 + inv02 + 1.0 / n11 + 1.0 / n12);
}

double period1_se(const DesignConfig& c) {
    return c.sigma * std::sqrt(1.0 / c.n11 + 1.0 / c.n01);
}

}  // namespace ncc
