#include "gseq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gseq/errors.hpp"
#include "gseq/quadrature.hpp"

namespace gseq {

Grid::Grid(double lo_, double hi_, std::size_t n_points_)
    : lo(lo_), hi(hi_), n_points(n_points_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw validation_error("Grid: need finite lo < hi");
    }
    if (n_points < 3 || n_points % 2 == 0) {
        throw validation_error("Grid: n_points must be odd and >= 3");
    }
}

std::size_t Grid::odd_points_for(double width, double target_spacing,
                                 std::size_t min_points) {
    if (!(width > 0.0) || !(target_spacing > 0.0)) {
        throw validation_error("Grid::odd_points_for: width and spacing must be positive");
    }
    auto n = static_cast<std::size_t>(std::ceil(width / target_spacing)) + 1;
    n = std::max(n, min_points);
    if (n % 2 == 0) ++n;
    return std::max<std::size_t>(n, 3);
}

GridDensity make_grid_density(const Grid& grid, std::vector<double> values) {
    if (values.size() != grid.n_points) {
        throw validation_error("GridDensity: value count must match the grid");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw numeric_error("GridDensity: non-finite density value");
        if (v < 0.0) throw validation_error("GridDensity: density values must be nonnegative");
    }
    GridDensity d;
    d.grid = grid;
    d.values = std::move(values);
    d.mass = simpson_integrate(d.grid, d.values);
    return d;
}

std::vector<double> GridDensity::cumulative() const {
    const double h = grid.spacing();
    const std::size_t n = values.size();
    std::vector<double> cum(n, 0.0);
    // Even nodes: composite Simpson pairs. Odd nodes: half-panel integral
    // from the cubic through four neighbors (one order better than the
    // quadratic, which matters once sub-densities get renormalized by small
    // stopping probabilities).
    for (std::size_t i = 0; i + 2 < n; i += 2) {
        const double f0 = values[i], f1 = values[i + 1], f2 = values[i + 2];
        double half;
        if (i == 0) {
            const double f3 = n > 3 ? values[3] : f2; // quadratic fallback at n == 3
            half = n > 3 ? h / 24.0 * (9.0 * f0 + 19.0 * f1 - 5.0 * f2 + f3)
                         : h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
        } else {
            const double fm = values[i - 1];
            half = h / 24.0 * (-fm + 13.0 * f0 + 13.0 * f1 - f2);
        }
        cum[i + 1] = cum[i] + half;
        cum[i + 2] = cum[i] + h / 3.0 * (f0 + 4.0 * f1 + f2);
    }
    return cum;
}

TabulatedCdf::TabulatedCdf(const GridDensity& d)
    : grid_(d.grid), density_(d.values), cum_(d.cumulative()), mass_(d.mass) {}

double TabulatedCdf::operator()(double v) const {
    if (cum_.empty()) return 0.0;
    if (v <= grid_.lo) return 0.0;
    if (v >= grid_.hi) return mass_;
    const double h = grid_.spacing();
    const double s = (v - grid_.lo) / h;
    auto i = static_cast<std::size_t>(s);
    i = std::min(i, grid_.n_points - 2);
    const double t = s - static_cast<double>(i);
    // Cubic Hermite on [x_i, x_{i+1}]: endpoint integrals with the density
    // as the derivative of the CDF.
    const double c0 = cum_[i], c1 = cum_[i + 1];
    const double d0 = density_[i] * h, d1 = density_[i + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    const double val = (2.0 * t3 - 3.0 * t2 + 1.0) * c0 + (t3 - 2.0 * t2 + t) * d0 +
                       (-2.0 * t3 + 3.0 * t2) * c1 + (t3 - t2) * d1;
    return std::clamp(val, 0.0, mass_);
}

} // namespace gseq
