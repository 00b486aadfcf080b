#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gseq/design.hpp"

namespace gseq {

/// Data observed when a trial stops: the stage index and every outcome
/// collected through that stage (n_(d) values).
struct StoppedSample {
    std::size_t stage = 1;
    std::vector<double> outcomes;
};

/// Sufficient statistic of the stopped-data likelihood: (sum of outcomes,
/// stopping stage).
struct SufficientStat {
    double sum = 0.0;
    std::size_t stage = 1;
};

/// Cumulative z-statistics T_(1)..T_(d) induced by the outcomes.
std::vector<double> statistic_path(const SequentialDesign& design,
                                   std::span<const double> outcomes,
                                   std::size_t through_stage);

/// Throws validation_error unless the sample lies in the adapted support and
/// is consistent with the stopping rule (continued below every earlier
/// boundary; exceeded its own boundary when stopping early).
void require_consistent(const SequentialDesign& design, const StoppedSample& sample);

SufficientStat sufficient_stat(const StoppedSample& sample);

/// Log of the stopped-data likelihood (the sub-density on its support):
/// sum of normal log densities of the observed outcomes. Throws
/// validation_error off the support, where the density is zero.
double joint_log_density(const SequentialDesign& design, const StoppedSample& sample,
                         double theta);

/// Maximum likelihood estimate: the plain mean of the observed outcomes,
/// identical to the fixed-sample MLE on the same data.
double mle(const StoppedSample& sample);

/// Interim log likelihood ratio of theta1 vs theta0 given the data through
/// stage `stage`: (theta1-theta0)*sum(x)/sigma^2 - n_(d)(theta1^2-theta0^2)/(2 sigma^2).
/// Strictly increasing in sum(x); throws when theta1 <= theta0.
double interim_log_lr(const SequentialDesign& design,
                      std::span<const double> outcomes_through_stage, std::size_t stage,
                      double theta0, double theta1);

struct LRDecision {
    std::size_t stage = 1;
    double log_lr = 0.0;
    bool rejected = false;
};

/// Supplies stage s (0-based) outcomes on demand; must return exactly
/// stage_n[s] values.
using StageSource = std::function<std::vector<double>(std::size_t stage_index)>;

/// Runs the sequential likelihood-ratio test: stop and reject at the first
/// interim stage with T_(d) > c_d; at stage K reject iff T_(K) > c_K.
/// Consumes exactly n_(D) observations.
LRDecision run_sequential_lr_test(const SequentialDesign& design, const Hypotheses& hyp,
                                  const StageSource& source);

/// A pluggable sequential competitor: a per-stage scalar statistic of the
/// cumulative outcomes plus stage boundaries. The auxiliary uniform (one
/// per stage, from the replication substream) lets randomized statistics
/// stay deterministic under common random numbers.
struct CompetingTest {
    std::string name;
    std::function<double(std::span<const double> cumulative_outcomes, std::size_t stage,
                         double aux_uniform)>
        statistic;
    std::vector<double> boundaries; // filled by calibrate_competing
};

/// The shipped reference competitor: the randomized sign test. Statistic is
/// the standardized count of positive outcomes with a U(0,1) tie-break added
/// to the count, which makes the null distribution continuous and hence
/// calibratable to any level.
CompetingTest sign_statistic_test();

/// The z-statistic itself as a competitor (self-comparison harness).
CompetingTest z_statistic_test();

struct CalibrationResult {
    std::vector<double> boundaries;
    std::vector<double> target_alpha;   // designLR's conditional stage alphas
    std::vector<double> achieved_alpha; // empirical conditional exceedance rates
    std::size_t replications = 0;
};

/// Calibrates the competing test's stage boundaries under theta0 by
/// empirical conditional quantiles so its stage-wise type I errors match the
/// design's. Throws validation_error when the achieved levels miss the
/// targets by more than 4 binomial standard errors.
CalibrationResult calibrate_competing(const SequentialDesign& design, const Hypotheses& hyp,
                                      CompetingTest& test, std::size_t replications,
                                      std::uint64_t seed,
                                      std::size_t grid_points = kDefaultGridPoints);

struct PowerComparisonRow {
    double theta = 0.0;
    double power_lr = 0.0;
    double se_lr = 0.0;
    double power_comp = 0.0;
    double se_comp = 0.0;
    double diff_se = 0.0; // SE of (comp - lr) under common random numbers
    bool flagged = false; // competing beats LR by more than 3 paired SEs
};

struct PowerComparisonReport {
    std::vector<PowerComparisonRow> rows;
};

/// Monte Carlo power comparison of the sequential LR test against a
/// calibrated competitor over a theta grid, with common random numbers.
PowerComparisonReport power_dominance_trial(const SequentialDesign& design,
                                            const Hypotheses& hyp,
                                            const CompetingTest& competing,
                                            std::span<const double> thetas,
                                            std::size_t replications, std::uint64_t seed);

} // namespace gseq
