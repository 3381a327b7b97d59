#include "ncc/datagen.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "ncc/rng.hpp"

namespace ncc {

TrialDataset::TrialDataset(std::array<Eigen::VectorXd, kNumCells> responses,
                           std::array<std::vector<int>, kNumCells> patient_index)
    : responses_(std::move(responses)), index_(std::move(patient_index)) {
    for (int k = 0; k < kNumCells; ++k) {
        if (responses_[k].size() != Eigen::Index(index_[k].size()))
            throw std::invalid_argument("TrialDataset: responses and indices differ in length");
        summary_.n[k] = int(responses_[k].size());
        summary_.mean[k] = summary_.n[k] > 0 ? responses_[k].mean() : 0.0;
    }
}

std::vector<PatientRecord> TrialDataset::patients() const {
    std::vector<PatientRecord> out;
    for (int k = 0; k < kNumCells; ++k) {
        const auto cell = Cell(k);
        for (Eigen::Index i = 0; i < responses_[k].size(); ++i)
            out.push_back({index_[k][i], arm_of(cell), period_of(cell), responses_[k][i]});
    }
    std::sort(out.begin(), out.end(),
              [](const PatientRecord& a, const PatientRecord& b) { return a.index < b.index; });
    return out;
}

TrialDataset TrialDataset::without_arm1_period2() const {
    auto r = responses_;
    auto idx = index_;
    r[int(Cell::c12)].resize(0);
    idx[int(Cell::c12)].clear();
    return TrialDataset(std::move(r), std::move(idx));
}

double time_trend(int patient, int total, int period, const TimeTrendSpec& spec) {
    switch (spec.pattern) {
        case TrendPattern::none: return 0.0;
        case TrendPattern::stepwise: return period == 2 ? spec.lambda : 0.0;
        case TrendPattern::linear:
            if (total < 2) throw std::invalid_argument("linear trend needs at least two patients");
            if (patient < 1 || patient > total)
                throw std::out_of_range("patient index outside 1..N");
            return spec.lambda * double(patient - 1) / double(total - 1);
    }
    return 0.0;
}

namespace {

// Block-randomized allocation: the counts are split into g = gcd(counts)
// blocks of identical composition, each shuffled independently.
std::vector<Cell> allocation_sequence(const std::vector<std::pair<Cell, int>>& counts,
                                      rng::Engine& gen) {
    int g = 0;
    int total = 0;
    for (auto [cell, n] : counts) {
        g = std::gcd(g, n);
        total += n;
    }
    std::vector<Cell> seq;
    seq.reserve(total);
    if (total == 0) return seq;
    std::vector<Cell> block;
    for (auto [cell, n] : counts) block.insert(block.end(), n / g, cell);
    for (int b = 0; b < g; ++b) {
        std::shuffle(block.begin(), block.end(), gen);
        seq.insert(seq.end(), block.begin(), block.end());
    }
    return seq;
}

double arm_effect(int arm, const DesignConfig& c) {
    return arm == 1 ? c.theta1 : arm == 2 ? c.theta2 : 0.0;
}

void recruit(const std::vector<std::pair<Cell, int>>& counts, int first_index, int period,
             const DesignConfig& config, rng::Engine& gen,
             std::array<std::vector<double>, kNumCells>& y,
             std::array<std::vector<int>, kNumCells>& idx) {
    std::normal_distribution<double> noise(0.0, 1.0);
    const int total = config.planned_total();
    int j = first_index;
    for (Cell cell : allocation_sequence(counts, gen)) {
        const double mu = arm_effect(arm_of(cell), config) + time_trend(j, total, period, config.trend);
        y[int(cell)].push_back(mu + config.sigma * noise(gen));
        idx[int(cell)].push_back(j);
        ++j;
    }
}

TrialDataset assemble(std::array<std::vector<double>, kNumCells>& y,
                      std::array<std::vector<int>, kNumCells>& idx) {
    std::array<Eigen::VectorXd, kNumCells> r;
    for (int k = 0; k < kNumCells; ++k)
        r[k] = Eigen::Map<const Eigen::VectorXd>(y[k].data(), Eigen::Index(y[k].size()));
    return TrialDataset(std::move(r), std::move(idx));
}

}  // namespace

TrialDataset simulate_period1(const DesignConfig& config, std::uint64_t seed) {
    rng::Engine gen(rng::derive_seed(seed, rng::kPeriod1));
    std::array<std::vector<double>, kNumCells> y;
    std::array<std::vector<int>, kNumCells> idx;
    recruit({{Cell::c01, config.n01}, {Cell::c11, config.n11}}, 1, 1, config, gen, y, idx);
    return assemble(y, idx);
}

TrialDataset complete_period2(const TrialDataset& period1, const DesignConfig& config,
                              std::uint64_t seed, bool arm1_continues) {
    rng::Engine gen(rng::derive_seed(seed, rng::kPeriod2));
    std::array<std::vector<double>, kNumCells> y;
    std::array<std::vector<int>, kNumCells> idx;
    for (Cell c : {Cell::c01, Cell::c11}) {
        const auto& v = period1.responses(c);
        y[int(c)].assign(v.data(), v.data() + v.size());
        idx[int(c)] = period1.patient_index(c);
    }
    std::vector<std::pair<Cell, int>> counts{{Cell::c02, config.n02}};
    if (arm1_continues) counts.push_back({Cell::c12, config.n12});
    counts.push_back({Cell::c22, config.n22});
    const int first = period1.count(Cell::c01) + period1.count(Cell::c11) + 1;
    recruit(counts, first, 2, config, gen, y, idx);
    return assemble(y, idx);
}

TrialDataset simulate_trial(const DesignConfig& config, std::uint64_t seed) {
    return complete_period2(simulate_period1(config, seed), config, seed, true);
}

void write_patients_csv(std::ostream& os, const TrialDataset& data) {
    os << "j,arm,period,y\n";
    char buf[64];
    for (const auto& p : data.patients()) {
        std::snprintf(buf, sizeof buf, "%.17g", p.y);
        os << p.index << ',' << p.arm << ',' << p.period << ',' << buf << '\n';
    }
}

}  // namespace ncc
