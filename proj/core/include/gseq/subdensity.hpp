#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gseq/design.hpp"
#include "gseq/grid.hpp"

namespace gseq {

/// Stage-to-stage law of the cumulative statistic on the z-scale,
///   T_(d) = prev_weight[d] * T_(d-1) + incr_weight[d] * Z_d,
/// with Z_d ~ N(drift[d], 1) independent of the past. For a finite design
/// prev_weight[d] = sqrt(n_(d-1)/n_(d)) and incr_weight[d] = sqrt(n_d/n_(d));
/// the asymptotic mixtures use the same structure with limiting ratios.
struct StageLaw {
    std::vector<double> prev_weight; // index 0 unused (0.0)
    std::vector<double> incr_weight; // index 0 is 1.0
    std::vector<double> drift;       // per-stage increment drift
    std::vector<double> boundaries;  // c_1..c_K

    std::size_t num_stages() const { return boundaries.size(); }
    /// Mean of T_(d) (1-based stage).
    double stage_mean(std::size_t stage) const;

    static StageLaw from_design(const SequentialDesign& design, double theta);
};

/// Full stage-wise anatomy at one parameter value: Armitage sub-densities
/// restricted to their stopping/terminal regions, the continuation-region
/// recursion states, and the stopping-stage distribution.
struct StageDistributions {
    double theta = 0.0; // outcome-scale theta (NaN for ratio-based laws)
    StageLaw law;
    std::vector<GridDensity> sub;          // K entries; d < K on (c_d, hi], K on full grid
    std::vector<GridDensity> continuation; // K-1 entries on [lo, c_d]
    std::vector<double> stop_probs;        // Pr(D = d)
    std::vector<double> reach_probs;       // Pr(D >= d)
    double mass_deficit = 0.0;             // worst per-stage accounting error

    /// Sub-density f_d of T_(d) on {D >= d} at an arbitrary point, evaluated
    /// through the stored continuation state (exact quadrature route, no
    /// interpolation).
    double reached_density_at(std::size_t stage, double t) const;

    /// Integral of f_d from -inf (numerically, the support edge) to v by a
    /// fresh Simpson pass over reached_density_at.
    double reached_cdf(std::size_t stage, double v) const;
};

/// Armitage recursion: builds the full anatomy for one theta. grid_points
/// sets the point budget for a reference-width grid; wider grids scale up to
/// keep the spacing (and hence the quadrature error) uniform.
StageDistributions compute_anatomy(const SequentialDesign& design, double theta,
                                   std::size_t grid_points = kDefaultGridPoints);
StageDistributions compute_anatomy(const StageLaw& law,
                                   std::size_t grid_points = kDefaultGridPoints);

/// Pr(D = d, reject at d) per stage: early stops always reject; at stage K
/// only the mass above c_K does.
std::vector<double> rejection_masses(const StageDistributions& sd);

enum class ViewKind { final_stage, interim, design };

/// One of the three probability views of the terminal statistic T_(D):
/// final (D = d), interim (D >= d), design (unconditional mixture).
struct DistributionView {
    struct Component {
        double weight;       // mixture weight (sums to 1 across components)
        GridDensity density; // normalized conditional density f^C
        TabulatedCdf cdf;
    };

    ViewKind kind = ViewKind::design;
    std::size_t stage = 0; // 1-based; 0 for the design view
    std::vector<Component> components;

    double cdf(double v) const;
    double pdf(double v) const;
};

/// Law of T_(d) given D = d (Eq. 3 view): sub-density over Pr(D = d).
DistributionView final_view(const StageDistributions& sd, std::size_t stage);

/// Law of T_(D) given D >= d: mixture of final views k >= d weighted by
/// Pr(D = k)/Pr(D >= d).
DistributionView interim_view(const StageDistributions& sd, std::size_t stage);

/// Unconditional law of T_(D): mixture over all stages.
DistributionView design_view(const StageDistributions& sd);

/// Membership in the adapted support: every cumulative statistic before the
/// last entry must lie at or below its boundary.
bool is_possible_path(const SequentialDesign& design, std::span<const double> t_path);

} // namespace gseq
