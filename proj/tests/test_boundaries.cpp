#include <doctest.h>

#include <cmath>
#include <vector>

#include "gseq/boundaries.hpp"
#include "gseq/errors.hpp"
#include "gseq/subdensity.hpp"

using namespace gseq;

namespace {

SequentialDesign two_stage_template() { return {2, {1, 1}, {0.0, 0.0}}; }

SpendingPlan explicit_plan(std::vector<double> inc) {
    SpendingPlan plan;
    plan.kind = SpendingKind::explicit_increments;
    plan.num_stages = inc.size();
    plan.alpha_total = 0.0;
    for (double v : inc) plan.alpha_total += v;
    plan.increments = std::move(inc);
    return plan;
}

} // namespace

TEST_CASE("solve_explicit: single stage is the fixed-sample quantile") {
    const auto sol = solve_explicit(explicit_plan({0.025}), {1, {1}, {0.0}});
    CHECK(std::fabs(sol.boundaries[0] - 1.959964) <= 1e-6);
    CHECK(std::fabs(sol.achieved_spending[0] - 0.025) <= 1e-9);
}

TEST_CASE("solve_explicit inverts the Pocock split") {
    // build the increments the c=2.18 design actually spends, then invert
    const SequentialDesign pocock{2, {1, 1}, {2.18, 2.18}};
    const auto sd = compute_anatomy(pocock, 0.0);
    const auto inc = rejection_masses(sd);
    const auto sol = solve_explicit(explicit_plan({inc[0], inc[1]}), two_stage_template());
    CHECK(std::fabs(sol.boundaries[0] - 2.18) <= 0.005);
    CHECK(std::fabs(sol.boundaries[1] - 2.18) <= 0.005);
    // the inversion is in fact much tighter than the paper's rounding band
    CHECK(std::fabs(sol.boundaries[0] - 2.18) <= 1e-6);
    CHECK(std::fabs(sol.boundaries[1] - 2.18) <= 1e-6);
}

TEST_CASE("solve_explicit with equal increments (0.0125, 0.0125)") {
    const auto sol = solve_explicit(explicit_plan({0.0125, 0.0125}), two_stage_template());
    CHECK(std::fabs(sol.boundaries[0] - 2.2414) <= 1e-4);
    // frozen quadrature-oracle values computed before the build
    CHECK(std::fabs(sol.boundaries[0] - 2.2414027276049454) <= 1e-8);
    CHECK(std::fabs(sol.boundaries[1] - 2.1251187986663599) <= 1e-6);
    for (double r : sol.report.residuals) CHECK(std::fabs(r) <= 1e-8);
}

TEST_CASE("solve_pocock") {
    SUBCASE("paper regression: alpha 0.025, two stages") {
        const auto sol = solve_pocock(0.025, 2, two_stage_template());
        CHECK(sol.boundaries[0] == sol.boundaries[1]);
        CHECK(sol.boundaries[0] >= 2.173);
        CHECK(sol.boundaries[0] <= 2.183);
        // frozen mpmath oracle of the exact constant
        CHECK(std::fabs(sol.boundaries[0] - 2.1782720943757341) <= 1e-6);
        CHECK(std::fabs(sol.achieved_spending.back() - 0.025) <= 1e-8);
    }
    SUBCASE("single stage") {
        const auto sol = solve_pocock(0.025, 1, {1, {1}, {0.0}});
        CHECK(std::fabs(sol.boundaries[0] - 1.959964) <= 1e-6);
    }
    SUBCASE("alpha 0.05 against the independent bivariate oracle") {
        const auto sol = solve_pocock(0.05, 2, two_stage_template());
        // frozen before the build: mpmath quadrature + root-find
        CHECK(std::fabs(sol.boundaries[0] - 1.8754232783758387) <= 1e-4);
    }
    SUBCASE("unequal stages rejected") {
        CHECK_THROWS_AS(solve_pocock(0.025, 2, {2, {1, 2}, {0.0, 0.0}}), validation_error);
    }
    SUBCASE("alpha outside (0,1) rejected") {
        CHECK_THROWS_AS(solve_pocock(0.0, 2, two_stage_template()), validation_error);
        CHECK_THROWS_AS(solve_pocock(1.0, 2, two_stage_template()), validation_error);
    }
    SUBCASE("unreachable alpha reports a solver error") {
        CHECK_THROWS_AS(solve_pocock(1e-300, 2, two_stage_template()), numeric_error);
    }
}

TEST_CASE("achieved_spending") {
    SUBCASE("Pocock c=2.18") {
        const auto sp = achieved_spending({2, {1, 1}, {2.18, 2.18}});
        CHECK(std::fabs(sp[0] - 0.01463) <= 5e-4);
        CHECK(std::fabs(sp[1] - 0.025) <= 5e-4);
        CHECK(std::fabs(sp[0] - 0.0146287307759893) <= 1e-8);
        CHECK(std::fabs(sp[1] - 0.0248952058091726) <= 1e-8);
    }
    SUBCASE("single stage") {
        const auto sp = achieved_spending({1, {1}, {1.9599639845400545}});
        CHECK(sp.size() == 1);
        CHECK(std::fabs(sp[0] - 0.025) <= 1e-8);
    }
    SUBCASE("huge first boundary spends nothing at stage 1") {
        const auto sp = achieved_spending({2, {1, 1}, {50.0, 1.9599639845400545}});
        CHECK(sp[0] <= 1e-12);
        CHECK(std::fabs(sp[1] - 0.025) <= 1e-8);
    }
}

TEST_CASE("round trip: achieved spending reproduces the plan") {
    const std::vector<double> inc{0.005, 0.01, 0.008};
    const auto sol = solve_explicit(explicit_plan(inc), {3, {2, 3, 4}, {0.0, 0.0, 0.0}});
    SequentialDesign solved{3, {2, 3, 4}, sol.boundaries};
    const auto sp = achieved_spending(solved);
    double cum = 0.0;
    for (std::size_t d = 0; d < 3; ++d) {
        cum += inc[d];
        CHECK(std::fabs(sp[d] - cum) <= 1e-6);
    }
}

TEST_CASE("stage rejection mass is strictly decreasing in the boundary") {
    double prev = 1.0;
    for (double c2 : {1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto sp = achieved_spending({2, {1, 1}, {2.18, c2}});
        const double stage2 = sp[1] - sp[0];
        CHECK(stage2 < prev);
        prev = stage2;
    }
}

TEST_CASE("solver determinism and grid robustness") {
    const auto a = solve_explicit(explicit_plan({0.01, 0.015}), two_stage_template());
    const auto b = solve_explicit(explicit_plan({0.01, 0.015}), two_stage_template());
    CHECK(a.boundaries == b.boundaries);
    const auto fine =
        solve_explicit(explicit_plan({0.01, 0.015}), two_stage_template(), 0.0, 2049);
    CHECK(std::fabs(a.boundaries[0] - fine.boundaries[0]) <= 1e-7);
    CHECK(std::fabs(a.boundaries[1] - fine.boundaries[1]) <= 1e-7);
}

TEST_CASE("plan validation errors") {
    SUBCASE("zero increment means an infinite boundary") {
        CHECK_THROWS_AS(
            solve_explicit(explicit_plan({0.0, 0.025}), two_stage_template()),
            validation_error);
    }
    SUBCASE("increment larger than the available continuation mass") {
        auto plan = explicit_plan({0.02, 0.99});
        CHECK_THROWS_AS(solve_explicit(plan, two_stage_template()), validation_error);
    }
    SUBCASE("increments must sum to alpha_total") {
        SpendingPlan plan;
        plan.kind = SpendingKind::explicit_increments;
        plan.num_stages = 2;
        plan.alpha_total = 0.05;
        plan.increments = {0.01, 0.01};
        CHECK_THROWS_AS(require_valid(plan), validation_error);
    }
    SUBCASE("wrong kind routed to solve_explicit") {
        SpendingPlan plan;
        plan.kind = SpendingKind::pocock_constant;
        plan.num_stages = 2;
        plan.alpha_total = 0.025;
        CHECK_THROWS_AS(solve_explicit(plan, two_stage_template()), validation_error);
    }
}
