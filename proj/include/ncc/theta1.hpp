#pragma once

#include <array>
#include <string_view>

#include "ncc/datagen.hpp"
#include "ncc/design.hpp"
#include "ncc/estimators.hpp"

namespace ncc {

/// Plug-in estimators of the Arm-1 effect used inside the bias correction.
enum class Theta1Method { pooled, period1, period2, cumvue };

inline constexpr std::array<Theta1Method, 4> kTheta1Methods = {
    Theta1Method::pooled, Theta1Method::period1, Theta1Method::period2, Theta1Method::cumvue};

std::string_view to_string(Theta1Method m);

/// Fisher information of the Arm-1 vs control difference after period 1
/// (i1) and after period 2 (i2).
struct InformationLevels {
    double i1 = 0.0;
    double i2 = 0.0;
};

InformationLevels information_levels(const CellSummary& cells, double sigma);

namespace theta1 {

/// Patient-weighted means over both periods: ybar1. - ybar0.
double pooled(const CellSummary& cells);
double period1(const CellSummary& cells);
/// Throws EstimatorError when Arm 1 has no period-2 data.
double period2(const CellSummary& cells);

/// Rao-Blackwellized stage-1 estimate E[ybar11 - ybar01 | final MLE, Z11 >= c1].
///
/// Given the final Z-statistic Z12, Z11 is normal with mean Z12 sqrt(I1/I2)
/// and variance (I2 - I1)/I2, so the truncated-normal mean gives
///   MLE + (I2 - I1)/(I2 sqrt(I1)) * f(c1) / (1 - F(c1))
/// with f, F the density and CDF of that normal. Requires a continued interim
/// and I2 > I1.
double umvue(const CellSummary& cells, const DesignConfig& config, const InterimResult& interim);

/// (I2 * MLE - I1 * UMVUE) / (I2 - I1), unbiased conditional on continuing.
double cumvue(const CellSummary& cells, const DesignConfig& config, const InterimResult& interim);

double estimate(Theta1Method method, const CellSummary& cells, const DesignConfig& config,
                const InterimResult& interim);

}  // namespace theta1
}  // namespace ncc
