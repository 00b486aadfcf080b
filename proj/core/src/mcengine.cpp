#include "gseq/mcengine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>

#include "gseq/errors.hpp"
#include "gseq/normal.hpp"

namespace gseq {

double standard_normal(SplitMix64& rng) { return normal_quantile(rng.next_uniform()); }

void require_valid(const SimConfig& cfg) {
    require_valid(cfg.design);
    if (cfg.replications < 1) throw validation_error("SimConfig: replications must be >= 1");
    if (cfg.histogram_bins < 2) throw validation_error("SimConfig: bins must be >= 2");
    if (!std::isfinite(cfg.theta)) throw validation_error("SimConfig: theta must be finite");
}

TrialRecord simulate_trial(const SequentialDesign& design, double theta,
                           SplitMix64& rng, std::vector<double>* outcomes) {
    const std::size_t k = design.num_stages;
    TrialRecord rec;
    rec.t_path.reserve(k);
    if (outcomes) outcomes->clear();

    double sum = 0.0;
    std::size_t n_seen = 0;
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t i = 0; i < design.stage_n[s]; ++i) {
            const double x = theta + design.sigma * standard_normal(rng);
            sum += x;
            if (outcomes) outcomes->push_back(x);
        }
        n_seen += design.stage_n[s];
        const double t = sum / (design.sigma * std::sqrt(static_cast<double>(n_seen)));
        rec.t_path.push_back(t);
        const bool exceeded = t > design.boundaries[s];
        if (s + 1 == k) {
            rec.stage = static_cast<std::uint32_t>(k);
            rec.rejected = exceeded;
        } else if (exceeded) {
            rec.stage = static_cast<std::uint32_t>(s + 1);
            rec.rejected = true;
            break;
        }
    }
    rec.mle = sum / static_cast<double>(n_seen);
    return rec;
}

namespace {

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    if (const char* env = std::getenv("GSEQ_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace

std::vector<TrialRecord> run_simulation(const SimConfig& cfg, unsigned threads) {
    require_valid(cfg);
    const std::size_t reps = cfg.replications;
    std::vector<TrialRecord> records(reps);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            SplitMix64 rng = substream(cfg.seed, r);
            records[r] = simulate_trial(cfg.design, cfg.theta, rng);
        }
    };

    const unsigned nthreads = std::min<std::size_t>(resolve_threads(threads), reps);
    if (nthreads <= 1) {
        worker(0, reps);
        return records;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::size_t chunk = (reps + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
        const std::size_t begin = static_cast<std::size_t>(t) * chunk;
        const std::size_t end = std::min(reps, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
    return records;
}

bool Condition::matches(const TrialRecord& r) const {
    switch (kind) {
        case Kind::stage_eq: return r.stage == stage;
        case Kind::stage_ge: return r.stage >= stage;
        case Kind::all: return true;
    }
    return false;
}

std::string Condition::label() const {
    switch (kind) {
        case Kind::stage_eq: return "D=" + std::to_string(stage);
        case Kind::stage_ge: return "D>=" + std::to_string(stage);
        case Kind::all: return "all";
    }
    return "?";
}

EmpiricalDist empirical_views(std::span<const TrialRecord> records, Condition condition,
                              RecordStat stat) {
    EmpiricalDist dist;
    dist.condition = condition;
    dist.stat = stat;
    for (const auto& rec : records) {
        if (!condition.matches(rec)) continue;
        dist.sorted.push_back(stat == RecordStat::mle ? rec.mle : rec.terminal_t());
    }
    if (dist.sorted.empty()) {
        throw validation_error("empirical_views: no record matches condition " +
                               condition.label());
    }
    std::sort(dist.sorted.begin(), dist.sorted.end());
    dist.count = dist.sorted.size();
    dist.mean = std::accumulate(dist.sorted.begin(), dist.sorted.end(), 0.0) /
                static_cast<double>(dist.count);
    double ss = 0.0;
    for (double v : dist.sorted) ss += (v - dist.mean) * (v - dist.mean);
    dist.sd = dist.count > 1 ? std::sqrt(ss / static_cast<double>(dist.count - 1)) : 0.0;
    return dist;
}

EmpiricalDist with_histogram(EmpiricalDist dist, double lo, double hi, std::size_t bins) {
    if (bins < 2) throw validation_error("with_histogram: bins must be >= 2");
    if (!(lo < hi)) throw validation_error("with_histogram: need lo < hi");
    Histogram h;
    h.edges.resize(bins + 1);
    const double w = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + w * static_cast<double>(i);
    h.counts.assign(bins, 0);
    for (double v : dist.sorted) {
        auto b = static_cast<long>(std::floor((v - lo) / w));
        b = std::clamp<long>(b, 0, static_cast<long>(bins) - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    dist.hist = std::move(h);
    return dist;
}

double ks_distance(const EmpiricalDist& emp, const std::function<double(double)>& exact_cdf) {
    if (emp.sorted.empty()) {
        throw validation_error("ks_distance: raw sample required (histogram-only summary)");
    }
    const auto n = static_cast<double>(emp.count);
    double dmax = 0.0;
    for (std::size_t i = 0; i < emp.count; ++i) {
        const double f = exact_cdf(emp.sorted[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        dmax = std::max({dmax, std::fabs(f - lo), std::fabs(hi - f)});
    }
    return dmax;
}

} // namespace gseq
