#include "ncc/theta1.hpp"

#include <cmath>

#include "ncc/normal.hpp"

namespace ncc {

std::string_view to_string(Theta1Method m) {
    switch (m) {
        case Theta1Method::pooled: return "pooled";
        case Theta1Method::period1: return "period1";
        case Theta1Method::period2: return "period2";
        case Theta1Method::cumvue: return "cumvue";
    }
    return "?";
}

InformationLevels information_levels(const CellSummary& c, double sigma) {
    const double s2 = sigma * sigma;
    const double n0 = c.count(Cell::c01) + c.count(Cell::c02);
    const double n1 = c.count(Cell::c11) + c.count(Cell::c12);
    return {1.0 / (s2 * (1.0 / c.count(Cell::c11) + 1.0 / c.count(Cell::c01))),
            1.0 / (s2 * (1.0 / n1 + 1.0 / n0))};
}

namespace theta1 {

double pooled(const CellSummary& c) {
    const double n0 = c.count(Cell::c01) + c.count(Cell::c02);
    const double n1 = c.count(Cell::c11) + c.count(Cell::c12);
    const double y1 = (c.count(Cell::c11) * c[Cell::c11] + c.count(Cell::c12) * c[Cell::c12]) / n1;
    const double y0 = (c.count(Cell::c01) * c[Cell::c01] + c.count(Cell::c02) * c[Cell::c02]) / n0;
    return y1 - y0;
}

double period1(const CellSummary& c) { return c[Cell::c11] - c[Cell::c01]; }

double period2(const CellSummary& c) {
    if (c.count(Cell::c12) == 0) throw EstimatorError("period-2 theta1 estimate needs Arm-1 period-2 data");
    return c[Cell::c12] - c[Cell::c02];
}

namespace {

InformationLevels checked_levels(const CellSummary& c, const DesignConfig& config,
                                 const InterimResult& interim) {
    if (!interim.continued) throw EstimatorError("UMVUE is defined only when Arm 1 continued");
    if (c.count(Cell::c12) == 0) throw EstimatorError("UMVUE needs Arm-1 period-2 data");
    const auto info = information_levels(c, config.sigma);
    if (!(info.i2 > info.i1)) throw EstimatorError("UMVUE needs final information above interim information");
    return info;
}

}  // namespace

double umvue(const CellSummary& c, const DesignConfig& config, const InterimResult& interim) {
    const auto [i1, i2] = checked_levels(c, config, interim);
    const double mle = pooled(c);
    // Always-continue rule: no truncation, the conditional mean is the MLE.
    if (std::isinf(interim.c1)) return mle;

    const double z12 = mle * std::sqrt(i2);
    const double mean = z12 * std::sqrt(i1 / i2);
    const double var = (i2 - i1) / i2;
    const double sd = std::sqrt(var);
    // f(c1)/(1 - F(c1)) for N(mean, var) equals mills((c1 - mean)/sd) / sd.
    const double hazard = normal::upper_mills_ratio((interim.c1 - mean) / sd) / sd;
    return mle - (i2 - i1) / (i2 * std::sqrt(i1)) * -hazard;
}

double cumvue(const CellSummary& c, const DesignConfig& config, const InterimResult& interim) {
    const auto [i1, i2] = checked_levels(c, config, interim);
    const double z12 = pooled(c) * std::sqrt(i2);
    return (z12 * std::sqrt(i2) - i1 * umvue(c, config, interim)) / (i2 - i1);
}

double estimate(Theta1Method method, const CellSummary& c, const DesignConfig& config,
                const InterimResult& interim) {
    switch (method) {
        case Theta1Method::pooled: return pooled(c);
        case Theta1Method::period1: return period1(c);
        case Theta1Method::period2: return period2(c);
        case Theta1Method::cumvue: return cumvue(c, config, interim);
    }
    throw std::invalid_argument("unknown Theta1Method");
}

}  // namespace theta1
}  // namespace ncc
