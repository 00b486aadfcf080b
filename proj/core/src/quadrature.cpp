#include "gseq/quadrature.hpp"

#include <cmath>

#include "gseq/errors.hpp"

namespace gseq {

double simpson_integrate(std::span<const double> values, double spacing) {
    if (values.size() < 3 || values.size() % 2 == 0) {
        throw validation_error("simpson_integrate: need an odd number of values (>= 3)");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw validation_error("simpson_integrate: spacing must be positive and finite");
    }
    double odds = 0.0, evens = 0.0;
    for (std::size_t i = 1; i + 1 < values.size(); i += 2) odds += values[i];
    for (std::size_t i = 2; i + 1 < values.size(); i += 2) evens += values[i];
    const double sum = values.front() + values.back() + 4.0 * odds + 2.0 * evens;
    if (!std::isfinite(sum)) throw numeric_error("simpson_integrate: non-finite values");
    return spacing / 3.0 * sum;
}

double simpson_integrate(const Grid& grid, std::span<const double> values) {
    if (values.size() != grid.n_points) {
        throw validation_error("simpson_integrate: value count must match the grid");
    }
    return simpson_integrate(values, grid.spacing());
}

double simpson_integrate(const std::function<double(double)>& f, double lo,
                         double hi, std::size_t n_points) {
    const Grid grid(lo, hi, n_points);
    std::vector<double> values(n_points);
    for (std::size_t i = 0; i < n_points; ++i) values[i] = f(grid.point(i));
    return simpson_integrate(grid, values);
}

} // namespace gseq
