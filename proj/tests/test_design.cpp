#include <doctest.h>

#include "ncc/design.hpp"
#include "ncc/normal.hpp"

using namespace ncc;

TEST_CASE("validate accepts the default design") {
    DesignConfig d;
    CHECK(&validate(d) == &d);
    CHECK(d.period_ratio() == 1.0);
    CHECK(d.allocation_ratio() == 1.0);
}

TEST_CASE("validate names the violated field") {
    DesignConfig d;
    d.sigma = 0.0;
    CHECK_THROWS_WITH_AS(validate(d), "sigma must be positive", ValidationError);
    d = {};
    d.alpha1 = 1.2;
    CHECK_THROWS_WITH_AS(validate(d), "alpha1 out of range", ValidationError);
    d = {};
    d.n01 = 0;
    CHECK_THROWS_AS(validate(d), ValidationError);
    d = {};
    d.alpha = 1.0;
    CHECK_THROWS_AS(validate(d), ValidationError);
    d = {};
    d.n12 = 0;  // legal: Arm 1 planned to stop
    CHECK_NOTHROW(validate(d));
}

TEST_CASE("critical value") {
    CHECK(critical_value(0.5) == 0.0);
    CHECK(std::abs(critical_value(0.025) - 1.959963984540054) < 1e-9);
    CHECK(std::abs(critical_value(0.15865525393145705) - 1.0) < 1e-9);
    CHECK_THROWS_AS(critical_value(0.0), std::domain_error);
    CHECK_THROWS_AS(critical_value(1.0), std::domain_error);

    double prev = critical_value(0.001);
    for (double a = 0.002; a < 1.0; a += 0.001) {
        const double c = critical_value(a);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("degenerate futility rules") {
    const auto stop = FutilityRule::from_alpha1(0.0);
    const auto go = FutilityRule::from_alpha1(1.0);
    CHECK(stop.kind == FutilityRule::Kind::always_stop);
    CHECK(go.kind == FutilityRule::Kind::always_continue);
    CHECK_FALSE(stop.continues(1e9));
    CHECK(go.continues(-1e9));
    const auto half = FutilityRule::from_alpha1(0.5);
    CHECK(half.continues(0.0));  // ties continue
    CHECK_FALSE(half.continues(-1e-15));
}

TEST_CASE("ncc weight examples") {
    CHECK(ncc_weight(150, 150, 150, 150) == 0.25);
    CHECK(ncc_weight(50, 150, 50, 150) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(ncc_weight(150, 150, 150, 0) == 0.0);
}

TEST_CASE("ncc weight is monotone and bounded over a grid") {
    const int sizes[] = {1, 2, 5, 10, 50, 150, 1000};
    for (int n01 : sizes)
        for (int n02 : sizes)
            for (int n11 : sizes)
                for (int n12 : sizes) {
                    const double w = ncc_weight(n01, n02, n11, n12);
                    CHECK(w > 0.0);
                    CHECK(w < 1.0);
                    CHECK(ncc_weight(n01 + 1, n02, n11, n12) > w);
                    CHECK(ncc_weight(n01, n02, n11 + 1, n12) > w);
                    CHECK(ncc_weight(n01, n02, n11, n12 + 1) > w);
                    CHECK(ncc_weight(n01, n02 + 1, n11, n12) < w);
                }
}
