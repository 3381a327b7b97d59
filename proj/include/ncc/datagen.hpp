#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "ncc/design.hpp"

namespace ncc {

/// The five (arm, period) cells of the design, in recruitment order.
enum class Cell : int { c01 = 0, c11 = 1, c02 = 2, c12 = 3, c22 = 4 };
inline constexpr int kNumCells = 5;

constexpr int arm_of(Cell c) {
    constexpr int arms[] = {0, 1, 0, 1, 2};
    return arms[int(c)];
}
constexpr int period_of(Cell c) { return int(c) < 2 ? 1 : 2; }

/// Cell means and counts; everything the closed-form estimators need.
struct CellSummary {
    std::array<double, kNumCells> mean{};
    std::array<int, kNumCells> n{};

    double operator[](Cell c) const { return mean[int(c)]; }
    int count(Cell c) const { return n[int(c)]; }
};

struct PatientRecord {
    int index;  // 1-based recruitment order
    int arm;
    int period;
    double y;
};

/// Per-patient responses grouped by cell. Immutable once built.
class TrialDataset {
   public:
    TrialDataset() = default;
    TrialDataset(std::array<Eigen::VectorXd, kNumCells> responses,
                 std::array<std::vector<int>, kNumCells> patient_index);

    const Eigen::VectorXd& responses(Cell c) const { return responses_[int(c)]; }
    const std::vector<int>& patient_index(Cell c) const { return index_[int(c)]; }
    const CellSummary& summary() const { return summary_; }
    int count(Cell c) const { return int(responses_[int(c)].size()); }
    double mean(Cell c) const { return summary_[c]; }

    /// All patients sorted by recruitment index.
    std::vector<PatientRecord> patients() const;

    /// Same data with the Arm-1 period-2 cell removed (Arm 1 stopped).
    TrialDataset without_arm1_period2() const;

   private:
    std::array<Eigen::VectorXd, kNumCells> responses_;
    std::array<std::vector<int>, kNumCells> index_;
    CellSummary summary_;
};

/// Additive time trend f(j). `total` is the planned maximum sample size.
double time_trend(int patient, int total, int period, const TimeTrendSpec& spec);

/// Period-1 cells only. Draws come from a sub-stream of `seed`, so they are
/// identical to the period-1 part of simulate_trial(config, seed).
TrialDataset simulate_period1(const DesignConfig& config, std::uint64_t seed);

/// Adds period-2 cells to a period-1 dataset. When Arm 1 has stopped the
/// (1,2) cell stays empty and period-2 indices run over arms 0 and 2 only.
TrialDataset complete_period2(const TrialDataset& period1, const DesignConfig& config,
                              std::uint64_t seed, bool arm1_continues);

/// Full planned trial (Arm 1 continuing).
TrialDataset simulate_trial(const DesignConfig& config, std::uint64_t seed);

/// CSV with header j,arm,period,y.
void write_patients_csv(std::ostream& os, const TrialDataset& data);

}  // namespace ncc
