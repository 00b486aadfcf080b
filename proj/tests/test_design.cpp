#include <doctest.h>

#include <cmath>
#include <string>

#include "gseq/design.hpp"
#include "gseq/errors.hpp"
#include "gseq/subdensity.hpp"
#include "oracles.hpp"

using namespace gseq;

namespace {

SequentialDesign pocock_218() { return {2, {1, 1}, {2.18, 2.18}, TestDirection::upper, 1.0}; }

bool report_mentions(const std::vector<std::string>& report, const std::string& needle) {
    for (const auto& line : report) {
        if (line.find(needle) != std::string::npos) return true;
    }
    return false;
}

} // namespace

TEST_CASE("cumulative_sizes") {
    CHECK(cumulative_sizes({2, {1, 1}, {2.18, 2.18}}) == std::vector<std::size_t>{1, 2});
    CHECK(cumulative_sizes({2, {100, 100}, {2.18, 2.18}}) ==
          std::vector<std::size_t>{100, 200});
    CHECK(cumulative_sizes({1, {5}, {1.96}}) == std::vector<std::size_t>{5});
}

TEST_CASE("validate_design") {
    CHECK(validate_design(pocock_218()).empty());

    SequentialDesign bad_size{2, {0, 5}, {2.0, 2.0}};
    CHECK(report_mentions(validate_design(bad_size), "stage size must be >= 1"));

    SequentialDesign bad_boundary{2, {1, 1}, {std::nan(""), 2.0}};
    CHECK(report_mentions(validate_design(bad_boundary), "boundary must be finite"));

    SequentialDesign bad_sigma = pocock_218();
    bad_sigma.sigma = 0.0;
    CHECK(report_mentions(validate_design(bad_sigma), "sigma"));

    SequentialDesign shape{3, {1, 1}, {2.0, 2.0}};
    CHECK(!validate_design(shape).empty());
}

TEST_CASE("operational characteristics of the c=2.18 Pocock design") {
    const auto oc = operational_characteristics(pocock_218(), {0.0, 2.18});
    // paper rounds the exact constant to 2.18; alpha lands near 0.025
    CHECK(std::fabs(oc.overall_alpha - 0.025) < 5e-4);
    // frozen erf-oracle value of the c=2.18 design's exact size
    CHECK(oc.overall_alpha == doctest::Approx(0.0248952058091726).epsilon(1e-7));
    CHECK(std::fabs(oc.stop_probs_null[0] - 0.01463) < 1e-5);
    CHECK(std::fabs(oc.stop_probs_null[1] - 0.98537) < 1e-5);
    // alpha-spending ends at overall alpha, nondecreasing
    CHECK(oc.alpha_spending.back() == oc.overall_alpha);
    CHECK(oc.alpha_spending[0] <= oc.alpha_spending[1]);
}

TEST_CASE("single-stage design reduces to the fixed-sample z-test") {
    const double c = 1.9599639845400545;
    const SequentialDesign d{1, {1}, {c}};
    const auto oc = operational_characteristics(d, {0.0, 1.5});
    CHECK(std::fabs(oc.overall_alpha - 0.025) <= 1e-8);
    const double power_expected =
        1.0 - static_cast<double>(oracle::std_normal_cdf(static_cast<long double>(c - 1.5)));
    CHECK(std::fabs(oc.overall_power - power_expected) <= 1e-9);
    CHECK(oc.stop_probs_null[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(oc.expected_n == doctest::Approx(1.0));
}

TEST_CASE("overall alpha: Table-1 composition equals sub-density masses") {
    const SequentialDesign d{3, {2, 3, 4}, {2.4, 2.2, 2.0}};
    const auto oc = operational_characteristics(d, {0.0, 0.7});
    double composed = 0.0, cont = 1.0;
    for (std::size_t k = 0; k < 3; ++k) {
        composed += oc.alpha_stage[k] * cont;
        cont *= 1.0 - oc.alpha_stage[k];
    }
    CHECK(std::fabs(composed - oc.overall_alpha) <= 1e-8);

    // independent route: sum of rejection masses from the anatomy
    const auto sd0 = compute_anatomy(d, 0.0);
    const auto rej = rejection_masses(sd0);
    double direct = 0.0;
    for (double r : rej) direct += r;
    CHECK(std::fabs(direct - oc.overall_alpha) <= 1e-10);
}

TEST_CASE("power identity and monotonicity in theta") {
    const SequentialDesign d = pocock_218();
    double prev_power = -1.0;
    for (double g = 0.5; g <= 4.0; g += 0.5) {
        const double theta = theta_for_drift(d, g);
        const auto oc = operational_characteristics(d, {0.0, theta});
        double prod = 1.0;
        for (double b : oc.beta_stage) prod *= b;
        CHECK(std::fabs(oc.overall_power - (1.0 - prod)) <= 1e-8);
        CHECK(oc.beta_spending.back() == doctest::Approx(prod).epsilon(1e-12));
        CHECK(oc.overall_power > prev_power);
        prev_power = oc.overall_power;
    }
}

TEST_CASE("stop-probability vectors sum to one") {
    const auto oc = operational_characteristics(pocock_218(), {0.0, 1.0});
    double s0 = 0.0, s1 = 0.0;
    for (double p : oc.stop_probs_null) s0 += p;
    for (double p : oc.stop_probs_alt) s1 += p;
    CHECK(std::fabs(s0 - 1.0) <= 1e-8);
    CHECK(std::fabs(s1 - 1.0) <= 1e-8);
}

TEST_CASE("expected sample size under the alternative") {
    const SequentialDesign d{2, {10, 10}, {2.18, 2.18}};
    const double theta = theta_for_drift(d, 2.18);
    const auto oc = operational_characteristics(d, {0.0, theta});
    CHECK(std::fabs(oc.stop_probs_alt[0] - 0.5) < 1e-6);
    CHECK(oc.expected_n ==
          doctest::Approx(10.0 * oc.stop_probs_alt[0] + 20.0 * oc.stop_probs_alt[1]));
    CHECK(oc.expected_n == doctest::Approx(15.0).epsilon(1e-5));
}

TEST_CASE("numerically unreachable stage raises a design error") {
    const SequentialDesign d{2, {1, 1}, {-20.0, 2.0}};
    CHECK_THROWS_AS(operational_characteristics(d, {0.0, 1.0}), validation_error);
}

TEST_CASE("drift helpers") {
    const SequentialDesign d{2, {100, 100}, {2.18, 2.18}, TestDirection::upper, 2.0};
    const double theta = theta_for_drift(d, 2.18);
    CHECK(theta == doctest::Approx(2.18 * 2.0 / 10.0));
    CHECK(drift_at_stage(d, theta, 1) == doctest::Approx(2.18));
    CHECK(drift_at_stage(d, theta, 2) == doctest::Approx(2.18 * std::sqrt(2.0)));
    CHECK_THROWS_AS(drift_at_stage(d, theta, 3), validation_error);
}

TEST_CASE("hypotheses validation") {
    CHECK_THROWS_AS(require_valid(Hypotheses{0.0, 0.0}), validation_error);
    CHECK_THROWS_AS(require_valid(Hypotheses{1.0, 0.5}), validation_error);
    CHECK_NOTHROW(require_valid(Hypotheses{0.0, 0.1}));
}
