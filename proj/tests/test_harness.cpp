#include <doctest.h>

#include <cmath>

#include "ncc/harness.hpp"

using namespace ncc;

namespace {
Scenario small(double alpha1, int reps, int b = 0) {
    Scenario s;
    s.id = "test";
    s.design.n01 = s.design.n11 = s.design.n02 = s.design.n12 = s.design.n22 = 20;
    s.design.alpha1 = alpha1;
    s.replicates = reps;
    s.bootstrap_b = b;
    return s;
}

bool same(const ReplicateResult& a, const ReplicateResult& b) {
    if (a.continued != b.continued || a.z11 != b.z11 || a.failed != b.failed) return false;
    for (int i = 0; i < kNumMethods; ++i) {
        const auto &x = a.records[i], &y = b.records[i];
        if (x.estimate != y.estimate || x.variance != y.variance || x.rejected != y.rejected) return false;
    }
    return true;
}
}  // namespace

TEST_CASE("Table 1 grid") {
    const auto grid = scenario_grid(Hypothesis::null);
    REQUIRE(grid.size() == 28);
    CHECK(table1_grid().size() == 56);

    auto find = [&](const std::string& id) {
        for (const auto& s : grid)
            if (s.id == id) return s;
        FAIL("missing " << id);
        return Scenario{};
    };
    const auto r2 = find("null/r=2").design;
    CHECK(r2.n01 == 300);
    CHECK(r2.n11 == 300);
    CHECK(r2.n12 == 150);
    CHECK(r2.n02 == 150);
    CHECK(find("null/r=1/15").design.n01 == 10);
    const auto a7 = find("null/a=7").design;
    CHECK(a7.n11 == 1050);
    CHECK(a7.n12 == 1050);
    CHECK(a7.n01 == 150);
    CHECK(find("null/lambda=-0.075").design.trend.lambda == -0.075);
    CHECK(find("null/alpha1=0.35").design.alpha1 == 0.35);

    for (const auto& s : table1_grid()) {
        CHECK(s.design.theta1 == 0.0);
        CHECK(s.design.theta2 == (s.hypothesis == Hypothesis::alternative ? 0.32 : 0.0));
        CHECK(s.design.n02 == 150);
        CHECK(s.design.n22 == 150);
    }
}

TEST_CASE("replicates are independent of execution order and worker count") {
    const auto s = small(0.5, 60, 20);
    const auto serial = run_replicates(s, 123, 1);
    const auto parallel = run_replicates(s, 123, 4);
    for (int i = 0; i < s.replicates; ++i) {
        CHECK(same(serial[i], parallel[i]));
        CHECK(same(serial[i], run_replicate(s, 123, i)));
    }
    const auto other = run_replicates(s, 124, 1);
    CHECK_FALSE(same(serial[0], other[0]));
}

TEST_CASE("always-stop rule collapses every method to the separate analysis") {
    const auto reps = run_replicates(small(0.0, 200), 9, 1);
    for (const auto& r : reps) {
        CHECK_FALSE(r.continued);
        for (const auto& rec : r.records) {
            CHECK(rec.estimate == r.records[1].estimate);
            CHECK(rec.tested());
        }
    }
    const auto oc = summarize(small(0.0, 200), reps);
    CHECK(oc.n_continuing == 0);
    CHECK_FALSE(oc[Method::unadjusted()][Statistic::conditional_bias].value);
    CHECK(*oc[Method::unadjusted()][Statistic::continuation_frequency].value == 0.0);
}

TEST_CASE("always-continue rule") {
    const auto oc = run_scenario(small(1.0, 200), 9);
    CHECK(oc.n_continuing == 200);
    CHECK(*oc[Method::separate()][Statistic::continuation_frequency].value == 1.0);
}

TEST_CASE("summaries: presence and MC standard errors") {
    const auto s = small(0.5, 400);
    const auto reps = run_replicates(s, 77, 1);
    const auto oc = summarize(s, reps);
    CHECK(oc.valid);
    CHECK(oc.n_failed == 0);
    const auto& unadj = oc[Method::unadjusted()];
    CHECK(unadj[Statistic::marginal_rejection_rate].value);
    CHECK_FALSE(oc[Method::mae(Theta1Method::cumvue)][Statistic::marginal_rejection_rate].value);

    // recompute the conditional bias by hand
    double sum = 0;
    int n = 0;
    for (const auto& r : reps)
        if (r.continued) sum += r.records[0].estimate, ++n;
    CHECK(oc.n_continuing == n);
    CHECK(*unadj[Statistic::conditional_bias].value == doctest::Approx(sum / n));
    CHECK(*unadj[Statistic::conditional_bias].mc_se > 0.0);
    const double p = double(n) / 400;
    CHECK(*unadj[Statistic::continuation_frequency].mc_se == doctest::Approx(std::sqrt(p * (1 - p) / 400)));
    CHECK(*unadj[Statistic::marginal_rmse].value >= std::abs(*unadj[Statistic::marginal_bias].value));
}

TEST_CASE("failed replicates are counted") {
    auto s = small(0.5, 10);
    std::vector<ReplicateResult> reps(10);
    reps[3].failed = true;
    const auto oc = summarize(s, reps);
    CHECK(oc.n_failed == 1);
    CHECK_FALSE(oc.valid);
}

TEST_CASE("scenario validation") {
    auto s = small(0.5, 0);
    CHECK_THROWS_AS(validate(s), ValidationError);
    s = small(0.5, 10);
    s.id.clear();
    CHECK_THROWS_AS(validate(s), ValidationError);
}
