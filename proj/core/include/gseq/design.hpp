#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gseq {

inline constexpr std::size_t kDefaultGridPoints = 1025;

/// Rejection happens when the cumulative statistic exceeds the boundary.
/// Only upper (efficacy) stopping is modeled.
enum class TestDirection { upper };

/// A K-stage group sequential design for the one-parameter normal-mean
/// model with known sigma. Boundaries c_1..c_K apply to the standardized
/// cumulative statistic T_(d) = sum_{i<=n_(d)} X_i / (sigma * sqrt(n_(d))):
/// stop and reject at the first interim stage with T_(d) > c_d, continue on
/// T_(d) <= c_d (ties continue); at stage K reject iff T_(K) > c_K.
struct SequentialDesign {
    std::size_t num_stages = 1;          // K
    std::vector<std::size_t> stage_n;    // n_1..n_K
    std::vector<double> boundaries;      // c_1..c_K
    TestDirection direction = TestDirection::upper;
    double sigma = 1.0;
};

struct Hypotheses {
    double theta0 = 0.0;
    double theta1 = 0.0; // must exceed theta0
};

/// Table-style summary of a design at (theta0, theta1).
///
/// alpha_stage[d]    conditional stage type I error Pr_0(T_(d) > c_d | D >= d)
/// alpha_spending[d] cumulative rejection probability under theta0 through d
/// beta_stage[d]     conditional stage type II error Pr_1(T_(d) <= c_d | D >= d)
/// beta_spending[d]  probability of no rejection through stage d under theta1
///                   (product of beta_stage; 1 - beta_spending is cumulative power)
/// expected_n        E[n_(D)] under theta1
struct OperationalCharacteristics {
    std::vector<double> alpha_stage;
    std::vector<double> alpha_spending;
    std::vector<double> beta_stage;
    std::vector<double> beta_spending;
    double overall_alpha = 0.0;
    double overall_power = 0.0;
    std::vector<double> stop_probs_null;
    std::vector<double> stop_probs_alt;
    double expected_n = 0.0;
};

/// Partial sums n_(1)..n_(K) of the stage sizes.
std::vector<std::size_t> cumulative_sizes(const SequentialDesign& design);

/// Structural invariant check; returns human-readable violations (empty =
/// valid). Does not throw.
std::vector<std::string> validate_design(const SequentialDesign& design);

/// Throws validation_error listing all violations.
void require_valid(const SequentialDesign& design);

void require_valid(const Hypotheses& hyp);

/// Drift (noncentrality) of the cumulative statistic at a 1-based stage:
/// theta * sqrt(n_(d)) / sigma.
double drift_at_stage(const SequentialDesign& design, double theta, std::size_t stage);

/// Outcome-scale theta producing stage-1 drift delta1 on the z-scale.
double theta_for_drift(const SequentialDesign& design, double delta1);

/// Exact operational characteristics from the stage-wise anatomy at theta0
/// and theta1. Throws validation_error when a stage is numerically
/// unreachable under either hypothesis.
OperationalCharacteristics operational_characteristics(
    const SequentialDesign& design, const Hypotheses& hyp,
    std::size_t grid_points = kDefaultGridPoints);

} // namespace gseq
