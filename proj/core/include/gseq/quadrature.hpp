#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "gseq/grid.hpp"

namespace gseq {

/// Composite Simpson rule over equally spaced values (odd count required).
/// Exact for cubics on the grid.
double simpson_integrate(std::span<const double> values, double spacing);

/// Same, with the grid supplying the spacing and the length check.
double simpson_integrate(const Grid& grid, std::span<const double> values);

/// Tabulate f on [lo, hi] with n_points (odd) and integrate.
double simpson_integrate(const std::function<double(double)>& f, double lo,
                         double hi, std::size_t n_points);

} // namespace gseq
