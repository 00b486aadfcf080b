#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gseq {

/// Uniform grid on [lo, hi] with an odd number of points (composite Simpson
/// needs an even number of intervals).
struct Grid {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n_points = 3;

    Grid() = default;
    Grid(double lo_, double hi_, std::size_t n_points_);

    double spacing() const { return (hi - lo) / static_cast<double>(n_points - 1); }
    double point(std::size_t i) const { return lo + spacing() * static_cast<double>(i); }

    /// Smallest odd point count >= min_points whose spacing on [lo,hi] is
    /// <= target_spacing.
    static std::size_t odd_points_for(double width, double target_spacing,
                                      std::size_t min_points);
};

/// Tabulated (sub-)density on a uniform grid together with its total mass.
/// Mass <= 1 is not enforced here; sub-densities integrate to stopping
/// probabilities, full densities to 1.
struct GridDensity {
    Grid grid;
    std::vector<double> values;
    double mass = 0.0;

    /// Simpson cumulative integral up to each grid point. Lazy callers use
    /// tabulated_cdf below instead.
    std::vector<double> cumulative() const;
};

/// Builds a GridDensity, validating non-negativity and computing the mass.
GridDensity make_grid_density(const Grid& grid, std::vector<double> values);

/// CDF of a tabulated density: Simpson prefix sums at the nodes, cubic
/// Hermite (value + known derivative = density) between nodes. Error is
/// O(h^4), well below the 1e-8 targets at default spacing.
class TabulatedCdf {
public:
    TabulatedCdf() = default;
    explicit TabulatedCdf(const GridDensity& d);

    /// Integral of the density from grid.lo to v, clamped at [0, mass].
    double operator()(double v) const;
    double mass() const { return mass_; }

private:
    Grid grid_;
    std::vector<double> density_;
    std::vector<double> cum_;
    double mass_ = 0.0;
};

} // namespace gseq
