#pragma once

#include <stdexcept>

#include "ncc/datagen.hpp"
#include "ncc/design.hpp"

namespace ncc {

/// An estimator was asked for on data that cannot support it
/// (e.g. the model-based estimate after Arm 1 stopped).
class EstimatorError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

class RankDeficientError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct InterimResult {
    double z11 = 0.0;
    double c1 = 0.0;  // +inf / -inf for the always-stop / always-continue rules
    bool continued = false;
};

/// How sigma enters Z11. Known sigma is the default; the pooled sample
/// variance mode is provided for exploratory use.
enum class VarianceMode { known, pooled };

InterimResult interim_z(const CellSummary& cells, const DesignConfig& config);
InterimResult interim_z(const TrialDataset& data, const DesignConfig& config,
                        VarianceMode mode = VarianceMode::known);

/// ybar22 - ybar02.
double separate_estimate(const CellSummary& cells);

/// Period-adjusted estimate ybar22 - [(1-rho) ybar02 + rho (ybar01 + ybar12 - ybar11)].
/// Throws EstimatorError when the (1,2) cell is empty.
double model_based_estimate(const CellSummary& cells);

/// Known-sigma variance of model_based_estimate.
double model_based_variance(const CellSummary& cells, double sigma);

/// Coefficients of E(y) = eta0 + theta1 I(arm=1) + theta2 I(arm=2) + tau I(period=2).
struct RegressionFit {
    double eta0 = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double tau = 0.0;
};

/// Least squares on the patient-level dummy design. Throws
/// RankDeficientError when the four columns are not identifiable.
RegressionFit ols_fit(const TrialDataset& data);

}  // namespace ncc
