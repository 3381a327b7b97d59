#include "ncc/estimators.hpp"

#include <cmath>

#include <Eigen/QR>

namespace ncc {

InterimResult interim_z(const CellSummary& cells, const DesignConfig& config) {
    const auto rule = FutilityRule::from_alpha1(config.alpha1);
    const double se = config.sigma * std::sqrt(1.0 / cells.count(Cell::c11) + 1.0 / cells.count(Cell::c01));
    const double z = (cells[Cell::c11] - cells[Cell::c01]) / se;
    return {z, rule.c1, rule.continues(z)};
}

InterimResult interim_z(const TrialDataset& data, const DesignConfig& config, VarianceMode mode) {
    if (mode == VarianceMode::known) return interim_z(data.summary(), config);

    const auto& y0 = data.responses(Cell::c01);
    const auto& y1 = data.responses(Cell::c11);
    const Eigen::Index df = y0.size() + y1.size() - 2;
    if (df < 1) throw EstimatorError("pooled variance needs at least three period-1 patients");
    const double ss = (y0.array() - y0.mean()).square().sum() + (y1.array() - y1.mean()).square().sum();
    DesignConfig pooled = config;
    pooled.sigma = std::sqrt(ss / double(df));
    return interim_z(data.summary(), pooled);
}

double separate_estimate(const CellSummary& cells) {
    return cells[Cell::c22] - cells[Cell::c02];
}

double model_based_estimate(const CellSummary& cells) {
    if (cells.count(Cell::c12) == 0)
        throw EstimatorError("model-based estimate needs period-2 Arm-1 data; use the separate estimate");
    const double rho = ncc_weight(cells.count(Cell::c01), cells.count(Cell::c02), cells.count(Cell::c11),
                                  cells.count(Cell::c12));
    const double ncc = cells[Cell::c01] + cells[Cell::c12] - cells[Cell::c11];
    const double control2 = (1.0 - rho) * cells[Cell::c02] + rho * ncc;
    return cells[Cell::c22] - control2;
}

double model_based_variance(const CellSummary& cells, double sigma) {
    const double s2 = sigma * sigma;
    const double var_cc = s2 / cells.count(Cell::c02);
    const double var22 = s2 / cells.count(Cell::c22);
    if (cells.count(Cell::c12) == 0) return var22 + var_cc;
    const double var_ncc =
        s2 * (1.0 / cells.count(Cell::c01) + 1.0 / cells.count(Cell::c11) + 1.0 / cells.count(Cell::c12));
    // inverse-variance combination of the two control-response estimates
    return var22 + var_cc * var_ncc / (var_cc + var_ncc);
}

RegressionFit ols_fit(const TrialDataset& data) {
    Eigen::Index total = 0;
    for (int k = 0; k < kNumCells; ++k) total += data.count(Cell(k));

    Eigen::MatrixXd X(total, 4);
    Eigen::VectorXd y(total);
    Eigen::Index row = 0;
    for (int k = 0; k < kNumCells; ++k) {
        const auto cell = Cell(k);
        const auto& r = data.responses(cell);
        const Eigen::RowVector4d x(1.0, arm_of(cell) == 1, arm_of(cell) == 2, period_of(cell) == 2);
        for (Eigen::Index i = 0; i < r.size(); ++i, ++row) {
            X.row(row) = x;
            y[row] = r[i];
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < 4) throw RankDeficientError("ols_fit: design matrix is rank deficient");
    const Eigen::Vector4d beta = qr.solve(y);
    return {beta[0], beta[1], beta[2], beta[3]};
}

}  // namespace ncc
