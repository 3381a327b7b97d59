#include "ncc/bias.hpp"

#include <cmath>

#include "ncc/normal.hpp"

namespace ncc {

namespace {
constexpr double kMinContinuation = 1e-12;
}

BiasInputs BiasInputs::make(double rho, double se1, double c1, double theta1) {
    if (!(se1 > 0.0)) throw ValidationError("se1 must be positive");
    return {rho, se1, c1, theta1, c1 - theta1 / se1};
}

BiasInputs BiasInputs::from_design(const DesignConfig& c) {
    const auto rule = FutilityRule::from_alpha1(c.alpha1);
    return make(ncc_weight(c), period1_se(c), rule.c1, c.theta1);
}

namespace bias {

double stop_probability(const BiasInputs& in) { return normal::cdf(in.gamma); }

double marginal(const BiasInputs& in) {
    if (std::isinf(in.gamma)) return 0.0;
    return in.rho * in.se1 * normal::pdf(in.gamma);
}

double conditional(const BiasInputs& in) {
    const double cont = normal::sf(in.gamma);
    if (cont < kMinContinuation) throw DegenerateProbabilityError("continuation probability ~ 0");
    return marginal(in) / cont;
}

}  // namespace bias

double truncated_normal_mean(double mu, double sd, double bound, TruncationSide side) {
    if (!(sd > 0.0)) throw std::domain_error("truncated_normal_mean: sd must be positive");
    const double z = (bound - mu) / sd;
    if (side == TruncationSide::above) return mu + sd * normal::upper_mills_ratio(z);
    // E[X | X < b] mirrors the upper tail of -X.
    return mu - sd * normal::upper_mills_ratio(-z);
}

}  // namespace ncc
