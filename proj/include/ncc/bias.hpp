#pragma once

#include <stdexcept>

#include "ncc/design.hpp"

namespace ncc {

/// Quantities the closed-form bias of the unadjusted estimator depends on.
struct BiasInputs {
    double rho = 0.0;
    double se1 = 0.0;     // sigma sqrt(1/n11 + 1/n01)
    double c1 = 0.0;
    double theta1 = 0.0;
    double gamma = 0.0;   // c1 - theta1 / se1

    static BiasInputs make(double rho, double se1, double c1, double theta1);
    /// From the planned design (rho uses the planned n12).
    static BiasInputs from_design(const DesignConfig& config);
};

class DegenerateProbabilityError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

namespace bias {

/// P(Z11 < c1) = Phi(gamma).
double stop_probability(const BiasInputs& in);

/// E[theta_tilde2 - theta2] = rho se1 phi(gamma). Does not depend on the
/// time trend or on theta2.
double marginal(const BiasInputs& in);

/// Bias given Arm 1 continues: marginal / (1 - Phi(gamma)). Throws
/// DegenerateProbabilityError when 1 - Phi(gamma) < 1e-12.
double conditional(const BiasInputs& in);

}  // namespace bias

enum class TruncationSide { above, below };

/// E[X | X > bound] (above) or E[X | X < bound] (below) for X ~ N(mu, sd^2).
double truncated_normal_mean(double mu, double sd, double bound, TruncationSide side);

}  // namespace ncc
