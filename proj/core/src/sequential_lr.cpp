#include "gseq/sequential_lr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gseq/errors.hpp"
#include "gseq/mcengine.hpp"
#include "gseq/subdensity.hpp"

namespace gseq {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594;

std::size_t stage_index_checked(const SequentialDesign& design, std::size_t stage) {
    if (stage == 0 || stage > design.num_stages) {
        throw validation_error("stage index out of range");
    }
    return stage - 1;
}

} // namespace

std::vector<double> statistic_path(const SequentialDesign& design,
                                   std::span<const double> outcomes,
                                   std::size_t through_stage) {
    require_valid(design);
    stage_index_checked(design, through_stage);
    const auto cum = cumulative_sizes(design);
    if (outcomes.size() < cum[through_stage - 1]) {
        throw validation_error("statistic_path: not enough outcomes for the stage");
    }
    std::vector<double> path(through_stage);
    double sum = 0.0;
    std::size_t next = 0;
    for (std::size_t d = 0; d < through_stage; ++d) {
        for (; next < cum[d]; ++next) sum += outcomes[next];
        path[d] = sum / (design.sigma * std::sqrt(static_cast<double>(cum[d])));
    }
    return path;
}

void require_consistent(const SequentialDesign& design, const StoppedSample& sample) {
    const std::size_t d = stage_index_checked(design, sample.stage) + 1;
    const auto cum = cumulative_sizes(design);
    if (sample.outcomes.size() != cum[d - 1]) {
        std::ostringstream os;
        os << "stopped sample must hold n_(" << d << ") = " << cum[d - 1]
           << " outcomes, got " << sample.outcomes.size();
        throw validation_error(os.str());
    }
    const auto path = statistic_path(design, sample.outcomes, d);
    for (std::size_t j = 0; j + 1 < d; ++j) {
        if (!(path[j] <= design.boundaries[j])) {
            throw validation_error(
                "sample outside the adapted support: an earlier statistic exceeded its "
                "boundary, so later observations are impossible");
        }
    }
    if (d < design.num_stages && !(path[d - 1] > design.boundaries[d - 1])) {
        throw validation_error(
            "sample inconsistent with the stopping rule: the design would have continued "
            "past the recorded stopping stage");
    }
}

SufficientStat sufficient_stat(const StoppedSample& sample) {
    if (sample.outcomes.empty()) throw validation_error("sufficient_stat: empty sample");
    return {std::accumulate(sample.outcomes.begin(), sample.outcomes.end(), 0.0),
            sample.stage};
}

double joint_log_density(const SequentialDesign& design, const StoppedSample& sample,
                         double theta) {
    if (!std::isfinite(theta)) throw validation_error("joint_log_density: theta not finite");
    require_consistent(design, sample);
    const double sigma = design.sigma;
    double ll = 0.0;
    for (double x : sample.outcomes) {
        const double z = (x - theta) / sigma;
        ll -= 0.5 * z * z;
    }
    const auto n = static_cast<double>(sample.outcomes.size());
    ll -= n * (std::log(sigma) + 0.5 * kLog2Pi);
    return ll;
}

double mle(const StoppedSample& sample) {
    if (sample.outcomes.empty()) throw validation_error("mle: empty sample");
    const double sum = std::accumulate(sample.outcomes.begin(), sample.outcomes.end(), 0.0);
    return sum / static_cast<double>(sample.outcomes.size());
}

double interim_log_lr(const SequentialDesign& design,
                      std::span<const double> outcomes_through_stage, std::size_t stage,
                      double theta0, double theta1) {
    if (!(theta1 >= theta0)) {
        throw validation_error("interim_log_lr: theta1 must not be below theta0");
    }
    const std::size_t d = stage_index_checked(design, stage) + 1;
    const auto cum = cumulative_sizes(design);
    if (outcomes_through_stage.size() != cum[d - 1]) {
        throw validation_error("interim_log_lr: outcomes must cover exactly n_(d)");
    }
    const auto path = statistic_path(design, outcomes_through_stage, d);
    for (std::size_t j = 0; j + 1 < d; ++j) {
        if (!(path[j] <= design.boundaries[j])) {
            throw validation_error("interim_log_lr: prefix outside the adapted support");
        }
    }
    const double sum = std::accumulate(outcomes_through_stage.begin(),
                                       outcomes_through_stage.end(), 0.0);
    const double s2 = design.sigma * design.sigma;
    const auto nd = static_cast<double>(cum[d - 1]);
    return (theta1 - theta0) * sum / s2 -
           nd * (theta1 * theta1 - theta0 * theta0) / (2.0 * s2);
}

LRDecision run_sequential_lr_test(const SequentialDesign& design, const Hypotheses& hyp,
                                  const StageSource& source) {
    require_valid(design);
    require_valid(hyp);
    const auto cum = cumulative_sizes(design);
    const std::size_t k = design.num_stages;

    std::vector<double> outcomes;
    outcomes.reserve(cum.back());
    double sum = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
        const std::vector<double> block = source(s);
        if (block.size() != design.stage_n[s]) {
            std::ostringstream os;
            os << "stage source returned " << block.size() << " outcomes for stage "
               << s + 1 << ", expected " << design.stage_n[s];
            throw validation_error(os.str());
        }
        for (double x : block) {
            if (!std::isfinite(x)) throw validation_error("stage source returned non-finite outcome");
            sum += x;
        }
        outcomes.insert(outcomes.end(), block.begin(), block.end());
        const double t = sum / (design.sigma * std::sqrt(static_cast<double>(cum[s])));
        const bool exceeded = t > design.boundaries[s];
        if (exceeded || s + 1 == k) {
            LRDecision decision;
            decision.stage = s + 1;
            decision.rejected = exceeded;
            decision.log_lr =
                interim_log_lr(design, outcomes, s + 1, hyp.theta0, hyp.theta1);
            return decision;
        }
    }
    throw numeric_error("run_sequential_lr_test: unreachable");
}

CompetingTest sign_statistic_test() {
    CompetingTest test;
    test.name = "randomized-sign";
    test.statistic = [](std::span<const double> outcomes, std::size_t, double aux) {
        double count = 0.0;
        for (double x : outcomes) count += x > 0.0 ? 1.0 : 0.0;
        const auto n = static_cast<double>(outcomes.size());
        // aux - 0.5 spreads each atom of the count over a unit interval,
        // making the null distribution continuous (randomized sign test).
        return (count + aux - 0.5 - 0.5 * n) / std::sqrt(0.25 * n);
    };
    return test;
}

CompetingTest z_statistic_test() {
    CompetingTest test;
    test.name = "z-statistic";
    test.statistic = [](std::span<const double> outcomes, std::size_t, double) {
        const double sum = std::accumulate(outcomes.begin(), outcomes.end(), 0.0);
        return sum / std::sqrt(static_cast<double>(outcomes.size()));
    };
    return test;
}

namespace {

// Full-path draw for one replication: outcomes for all K stages plus one
// auxiliary uniform per stage, in a fixed order so every test sees the same
// stream.
struct ReplicationDraw {
    std::vector<double> outcomes;
    std::vector<double> aux;
};

ReplicationDraw draw_replication(const SequentialDesign& design, double theta,
                                 SplitMix64& rng) {
    ReplicationDraw d;
    const auto cum = cumulative_sizes(design);
    d.outcomes.reserve(cum.back());
    d.aux.reserve(design.num_stages);
    for (std::size_t s = 0; s < design.num_stages; ++s) {
        for (std::size_t i = 0; i < design.stage_n[s]; ++i) {
            d.outcomes.push_back(theta + design.sigma * standard_normal(rng));
        }
        d.aux.push_back(rng.next_uniform());
    }
    return d;
}

// Sequential decision of a statistic-map test on a full path.
bool competing_rejects(const SequentialDesign& design, const CompetingTest& test,
                       const ReplicationDraw& draw, const std::vector<std::size_t>& cum) {
    for (std::size_t s = 0; s < design.num_stages; ++s) {
        const std::span<const double> prefix(draw.outcomes.data(), cum[s]);
        const double stat = test.statistic(prefix, s + 1, draw.aux[s]);
        if (stat > test.boundaries[s]) return true;
        if (stat != stat) throw numeric_error("competing statistic returned NaN");
    }
    return false;
}

bool lr_rejects(const SequentialDesign& design, const ReplicationDraw& draw,
                const std::vector<std::size_t>& cum) {
    double sum = 0.0;
    std::size_t next = 0;
    for (std::size_t s = 0; s < design.num_stages; ++s) {
        for (; next < cum[s]; ++next) sum += draw.outcomes[next];
        const double t = sum / (design.sigma * std::sqrt(static_cast<double>(cum[s])));
        if (t > design.boundaries[s]) return true;
    }
    return false;
}

} // namespace

CalibrationResult calibrate_competing(const SequentialDesign& design, const Hypotheses& hyp,
                                      CompetingTest& test, std::size_t replications,
                                      std::uint64_t seed, std::size_t grid_points) {
    require_valid(design);
    if (replications < 1000) {
        throw validation_error("calibrate_competing: need at least 1000 replications");
    }
    const auto cum = cumulative_sizes(design);
    const std::size_t k = design.num_stages;

    // Stage-wise conditional type I errors of the LR design, from the exact
    // anatomy under the null.
    const auto sd0 = compute_anatomy(design, hyp.theta0, grid_points);
    const auto rej0 = rejection_masses(sd0);
    CalibrationResult cal;
    cal.replications = replications;
    cal.target_alpha.resize(k);
    for (std::size_t d = 0; d < k; ++d) cal.target_alpha[d] = rej0[d] / sd0.reach_probs[d];

    // Per-replication statistic paths under the null.
    std::vector<std::vector<double>> stats(replications, std::vector<double>(k));
    for (std::size_t r = 0; r < replications; ++r) {
        SplitMix64 rng = substream(seed, r);
        const ReplicationDraw draw = draw_replication(design, hyp.theta0, rng);
        for (std::size_t s = 0; s < k; ++s) {
            const std::span<const double> prefix(draw.outcomes.data(), cum[s]);
            stats[r][s] = test.statistic(prefix, s + 1, draw.aux[s]);
        }
    }

    std::vector<std::size_t> alive(replications);
    std::iota(alive.begin(), alive.end(), 0);
    cal.boundaries.resize(k);
    cal.achieved_alpha.resize(k);

    for (std::size_t s = 0; s < k; ++s) {
        const std::size_t m = alive.size();
        if (m < 100) {
            throw validation_error("calibrate_competing: too few survivors to calibrate stage " +
                                   std::to_string(s + 1));
        }
        std::vector<double> vals(m);
        for (std::size_t i = 0; i < m; ++i) vals[i] = stats[alive[i]][s];
        std::sort(vals.begin(), vals.end());
        const auto reject_count = static_cast<std::size_t>(
            std::llround(cal.target_alpha[s] * static_cast<double>(m)));
        if (reject_count == 0 || reject_count >= m) {
            throw validation_error("calibrate_competing: target level unreachable at stage " +
                                   std::to_string(s + 1));
        }
        const double b = vals[m - reject_count - 1];
        cal.boundaries[s] = b;
        std::size_t exceed = 0;
        std::vector<std::size_t> next_alive;
        next_alive.reserve(m);
        for (std::size_t idx : alive) {
            if (stats[idx][s] > b) {
                ++exceed;
            } else {
                next_alive.push_back(idx);
            }
        }
        cal.achieved_alpha[s] = static_cast<double>(exceed) / static_cast<double>(m);
        const double se = std::sqrt(cal.target_alpha[s] * (1.0 - cal.target_alpha[s]) /
                                    static_cast<double>(m));
        if (std::fabs(cal.achieved_alpha[s] - cal.target_alpha[s]) > 4.0 * se) {
            std::ostringstream os;
            os << "calibrate_competing: stage " << s + 1 << " achieved level "
               << cal.achieved_alpha[s] << " misses target " << cal.target_alpha[s]
               << " (statistic too discrete?)";
            throw validation_error(os.str());
        }
        alive = std::move(next_alive);
    }

    test.boundaries = cal.boundaries;
    return cal;
}

PowerComparisonReport power_dominance_trial(const SequentialDesign& design,
                                            const Hypotheses& hyp,
                                            const CompetingTest& competing,
                                            std::span<const double> thetas,
                                            std::size_t replications, std::uint64_t seed) {
    require_valid(design);
    if (competing.boundaries.size() != design.num_stages) {
        throw validation_error(
            "power_dominance_trial: competitor not calibrated (boundary count mismatch)");
    }
    if (replications < 100) {
        throw validation_error("power_dominance_trial: need at least 100 replications");
    }
    const auto cum = cumulative_sizes(design);

    PowerComparisonReport report;
    report.rows.reserve(thetas.size());
    for (double theta : thetas) {
        std::size_t n_lr = 0, n_comp = 0, n_both = 0;
        for (std::size_t r = 0; r < replications; ++r) {
            // Same substream for every theta: common random numbers via the
            // monotone inverse-CDF map.
            SplitMix64 rng = substream(seed, r);
            const ReplicationDraw draw = draw_replication(design, theta, rng);
            const bool lr = lr_rejects(design, draw, cum);
            const bool comp = competing_rejects(design, competing, draw, cum);
            n_lr += lr;
            n_comp += comp;
            n_both += lr && comp;
        }
        const auto n = static_cast<double>(replications);
        PowerComparisonRow row;
        row.theta = theta;
        row.power_lr = static_cast<double>(n_lr) / n;
        row.power_comp = static_cast<double>(n_comp) / n;
        row.se_lr = std::sqrt(row.power_lr * (1.0 - row.power_lr) / n);
        row.se_comp = std::sqrt(row.power_comp * (1.0 - row.power_comp) / n);
        // Paired variance of the indicator difference.
        const double p10 = (static_cast<double>(n_comp) - static_cast<double>(n_both)) / n;
        const double p01 = (static_cast<double>(n_lr) - static_cast<double>(n_both)) / n;
        const double pd = row.power_comp - row.power_lr;
        const double var_d = p10 + p01 - pd * pd;
        row.diff_se = var_d > 0.0 ? std::sqrt(var_d / n) : 0.0;
        row.flagged = pd > 3.0 * row.diff_se && pd > 0.0;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace gseq
