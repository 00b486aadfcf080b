#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gseq/design.hpp"
#include "gseq/rng.hpp"

namespace gseq {

struct SimConfig {
    SequentialDesign design;
    double theta = 0.0;               // outcome-scale mean
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::size_t histogram_bins = 60;
};

void require_valid(const SimConfig& cfg);

/// One simulated trial. t_path holds the cumulative z-statistic at each
/// visited stage; mle is the mean of every observed outcome.
struct TrialRecord {
    std::uint32_t stage = 1;
    bool rejected = false;
    double mle = 0.0;
    std::vector<double> t_path;

    double terminal_t() const { return t_path.back(); }
};

/// Runs the trial simulation. Output is identical for identical (seed,
/// config) regardless of thread count; threads = 0 picks the environment
/// default (GSEQ_THREADS, else hardware concurrency).
std::vector<TrialRecord> run_simulation(const SimConfig& cfg, unsigned threads = 0);

/// Simulate a single replication with the given substream index (used by
/// tests and the likelihood-ratio machinery to regenerate outcome-level
/// samples).
TrialRecord simulate_trial(const SequentialDesign& design, double theta,
                           SplitMix64& rng, std::vector<double>* outcomes = nullptr);

struct Condition {
    enum class Kind { stage_eq, stage_ge, all };
    Kind kind = Kind::all;
    std::size_t stage = 1;

    static Condition d_eq(std::size_t d) { return {Kind::stage_eq, d}; }
    static Condition d_ge(std::size_t d) { return {Kind::stage_ge, d}; }
    static Condition every() { return {Kind::all, 1}; }

    bool matches(const TrialRecord& r) const;
    std::string label() const;
};

enum class RecordStat { mle, terminal };

struct Histogram {
    std::vector<double> edges;       // bins+1 edges
    std::vector<std::size_t> counts; // per bin; out-of-range values clamp to end bins
};

/// Empirical distribution of a statistic over the records matching a
/// condition. Holds the raw sorted sample unless built histogram-only.
struct EmpiricalDist {
    Condition condition;
    RecordStat stat = RecordStat::mle;
    std::vector<double> sorted; // empty for histogram-only summaries
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
    Histogram hist; // filled on demand by with_histogram
};

/// Filters records by the condition and summarizes the chosen statistic.
/// Throws validation_error when no record matches.
EmpiricalDist empirical_views(std::span<const TrialRecord> records, Condition condition,
                              RecordStat stat);

/// Attaches a fixed-edge histogram (edges typically derived from the exact
/// density grids so panels are comparable across theta).
EmpiricalDist with_histogram(EmpiricalDist dist, double lo, double hi, std::size_t bins);

/// Kolmogorov-Smirnov statistic sup |F_hat - F| over the sample points.
/// Requires the raw sorted sample.
double ks_distance(const EmpiricalDist& emp, const std::function<double(double)>& exact_cdf);

} // namespace gseq
