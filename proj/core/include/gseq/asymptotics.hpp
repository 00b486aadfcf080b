#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gseq/design.hpp"
#include "gseq/subdensity.hpp"

namespace gseq {

/// Limiting sample-size ratios: r[d] = lim n_(d)/n_d and the triangular
/// array r_cross[d][j] = lim n_(d)/n_j for j <= d (0-based storage,
/// r_cross[d] has d+1 entries, r_cross[d][d] == r[d]).
struct RatioLimits {
    std::vector<double> r;
    std::vector<std::vector<double>> r_cross;

    static RatioLimits from_design(const SequentialDesign& design);
};

void require_valid(const RatioLimits& ratios);

/// Local alternative theta = h / sqrt(n_1) (z-scale: h is the limiting
/// stage-1 drift for sigma = 1; general sigma scales as h*sigma).
struct LocalAlternative {
    double h = 0.0;
};

/// Limiting CDF of the terminal statistic under the local alternative: a
/// mixture of truncated normal pieces. Under the exact normal model the
/// stage laws are normal at every n, so the limit is evaluated by running
/// the recursion on the ratio-derived stage law.
struct LimitCDF {
    ViewKind kind = ViewKind::design;
    std::size_t stage = 0;
    DistributionView view;

    double operator()(double v) const { return view.cdf(v); }
};

/// Builds the ratio-derived stage law: increment weights 1/sqrt(r_(d)),
/// carry-over weights sqrt(1 - 1/r_(d)), stage drifts h*sqrt(r_(d)1/r_(d)).
StageLaw limiting_law(const RatioLimits& ratios, const SequentialDesign& design,
                      const LocalAlternative& local);

LimitCDF limit_cdf_design(const RatioLimits& ratios, const SequentialDesign& design,
                          const LocalAlternative& local,
                          std::size_t grid_points = kDefaultGridPoints);

enum class LimitCondition { stage_eq, stage_ge };

LimitCDF limit_cdf_conditional(const RatioLimits& ratios, const SequentialDesign& design,
                               const LocalAlternative& local, LimitCondition condition,
                               std::size_t stage,
                               std::size_t grid_points = kDefaultGridPoints);

struct DegeneracyRow {
    std::size_t n1 = 0;
    double stop_prob_stage1 = 0.0;
};

/// Fixed-alternative degeneracy: Pr(D=1) over growing n_1 (stage sizes
/// scaled proportionally from the template design), approaching 1.
std::vector<DegeneracyRow> degeneracy_demo(const SequentialDesign& design_template,
                                           double theta_fixed,
                                           std::span<const std::size_t> n1_grid,
                                           std::size_t grid_points = kDefaultGridPoints);

} // namespace gseq
