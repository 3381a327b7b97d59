#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ncc/datagen.hpp"
#include "ncc/normal.hpp"

using namespace ncc;

TEST_CASE("time trend patterns") {
    const TimeTrendSpec lin{TrendPattern::linear, 0.15};
    CHECK(time_trend(1, 750, 1, lin) == 0.0);
    CHECK(time_trend(750, 750, 2, lin) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(time_trend(376, 751, 2, lin) == doctest::Approx(0.075));
    CHECK_THROWS(time_trend(1, 1, 1, lin));

    const TimeTrendSpec step{TrendPattern::stepwise, 0.15};
    CHECK(time_trend(5, 750, 1, step) == 0.0);
    CHECK(time_trend(5, 750, 2, step) == 0.15);
    CHECK(time_trend(5, 750, 2, {TrendPattern::none, 0.15}) == 0.0);
}

TEST_CASE("simulated trial has the planned cell sizes and contiguous indices") {
    DesignConfig d;
    d.n01 = 10;
    d.n11 = 30;
    d.n02 = 20;
    d.n12 = 60;
    d.n22 = 20;
    const auto data = simulate_trial(d, 7);
    CHECK(data.count(Cell::c01) == 10);
    CHECK(data.count(Cell::c11) == 30);
    CHECK(data.count(Cell::c02) == 20);
    CHECK(data.count(Cell::c12) == 60);
    CHECK(data.count(Cell::c22) == 20);

    const auto patients = data.patients();
    REQUIRE(patients.size() == 140);
    for (std::size_t i = 0; i < patients.size(); ++i) {
        CHECK(patients[i].index == int(i) + 1);
        CHECK(patients[i].period == (i < 40 ? 1 : 2));
    }
    for (int k = 0; k < kNumCells; ++k) {
        const auto& y = data.responses(Cell(k));
        CHECK(std::abs(data.mean(Cell(k)) - y.sum() / double(y.size())) <= 1e-12 * (1 + std::abs(data.mean(Cell(k)))));
    }
}

TEST_CASE("block randomization keeps the allocation ratio within each block") {
    DesignConfig d;
    d.n01 = 50;
    d.n11 = 100;  // blocks of (1, 2)
    const auto p = simulate_trial(d, 3).patients();
    for (int b = 0; b < 50; ++b) {
        int arm1 = 0;
        for (int i = 0; i < 3; ++i) arm1 += p[3 * b + i].arm == 1;
        CHECK(arm1 == 2);
    }
}

TEST_CASE("stopped arm: period 2 indices stay contiguous over arms 0 and 2") {
    DesignConfig d;
    const auto p1 = simulate_period1(d, 11);
    const auto full = complete_period2(p1, d, 11, true);
    const auto stopped = complete_period2(p1, d, 11, false);
    CHECK(stopped.count(Cell::c12) == 0);
    CHECK(stopped.responses(Cell::c01) == full.responses(Cell::c01));
    CHECK(stopped.responses(Cell::c11) == full.responses(Cell::c11));
    const auto pts = stopped.patients();
    REQUIRE(pts.size() == 600);
    CHECK(pts.back().index == 600);
    CHECK(full.without_arm1_period2().count(Cell::c12) == 0);
}

TEST_CASE("same config and seed give identical data") {
    DesignConfig d;
    d.trend = {TrendPattern::linear, 0.1};
    const auto a = simulate_trial(d, 99);
    const auto b = simulate_trial(d, 99);
    const auto c = simulate_trial(d, 100);
    for (int k = 0; k < kNumCells; ++k) CHECK(a.responses(Cell(k)) == b.responses(Cell(k)));
    CHECK(a.responses(Cell::c01) != c.responses(Cell::c01));
}

TEST_CASE("vanishing noise recovers the mean structure") {
    DesignConfig d;
    d.sigma = 1e-12;
    d.theta1 = 0.1;
    d.theta2 = 0.32;
    const auto data = simulate_trial(d, 5);
    CHECK(std::abs(data.mean(Cell::c22) - data.mean(Cell::c02) - 0.32) < 1e-9);
    CHECK(std::abs(data.mean(Cell::c11) - data.mean(Cell::c01) - 0.1) < 1e-9);
}

TEST_CASE("stepwise trend shifts period-2 means by lambda (Monte Carlo)") {
    DesignConfig d;
    d.n01 = d.n11 = d.n02 = d.n12 = d.n22 = 10;
    d.trend = {TrendPattern::stepwise, 0.15};
    constexpr int reps = 100000;
    double s = 0, s2 = 0, arm_gap = 0, arm_gap2 = 0;
    for (int i = 0; i < reps; ++i) {
        const auto data = simulate_trial(d, 1000 + i);
        const double x = data.mean(Cell::c02) - data.mean(Cell::c01);
        s += x;
        s2 += x * x;
        // the shift is the same for Arm 1
        const double g = (data.mean(Cell::c12) - data.mean(Cell::c11)) - x;
        arm_gap += g;
        arm_gap2 += g * g;
    }
    const double m = s / reps, se = std::sqrt((s2 / reps - m * m) / reps);
    CHECK(std::abs(m - 0.15) < 3 * se);
    const double gm = arm_gap / reps, gse = std::sqrt((arm_gap2 / reps - gm * gm) / reps);
    CHECK(std::abs(gm) < 3 * gse);
}

TEST_CASE("linear trend affects concurrent arms equally in expectation") {
    DesignConfig d;
    d.n01 = d.n11 = d.n02 = d.n12 = d.n22 = 20;
    d.trend = {TrendPattern::linear, 1.0};
    constexpr int reps = 20000;
    double s = 0, s2 = 0;
    for (int i = 0; i < reps; ++i) {
        const auto data = simulate_trial(d, 50000 + i);
        const double g = data.mean(Cell::c22) - data.mean(Cell::c02);
        s += g;
        s2 += g * g;
    }
    const double m = s / reps, se = std::sqrt((s2 / reps - m * m) / reps);
    CHECK(std::abs(m) < 3 * se);
}

TEST_CASE("standardized cell means are standard normal (KS gate)") {
    DesignConfig d;
    d.n01 = 7;
    constexpr int reps = 10000;
    std::vector<double> z;
    for (int i = 0; i < reps; ++i) z.push_back(simulate_period1(d, 777 + i).mean(Cell::c01) * std::sqrt(7.0));
    std::sort(z.begin(), z.end());
    double ks = 0;
    for (int i = 0; i < reps; ++i) {
        const double f = normal::cdf(z[i]);
        ks = std::max({ks, std::abs(f - double(i) / reps), std::abs(f - double(i + 1) / reps)});
    }
    CHECK(ks < 1.63 / std::sqrt(double(reps)));  // 1% level
}

TEST_CASE("patient CSV dump") {
    DesignConfig d;
    d.n01 = d.n11 = d.n02 = d.n12 = d.n22 = 2;
    std::ostringstream os;
    write_patients_csv(os, simulate_trial(d, 1));
    const auto text = os.str();
    CHECK(text.rfind("j,arm,period,y\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}
