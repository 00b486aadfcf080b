#pragma once

// Internal helpers shared by the recursion (subdensity.cpp) and the
// boundary solver (boundaries.cpp). Not installed.

#include <cmath>
#include <vector>

#include "gseq/grid.hpp"

namespace gseq::detail {

inline constexpr double kTailHalfWidth = 8.5;   // tail mass beyond is < 1e-17
inline constexpr double kReferenceWidth = 17.0; // width the point budget is quoted at
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

inline double std_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// Simpson weights h/3 * [1,4,2,...,2,4,1].
inline std::vector<double> simpson_weights(const Grid& g) {
    std::vector<double> w(g.n_points, 0.0);
    const double h3 = g.spacing() / 3.0;
    w.front() = w.back() = h3;
    for (std::size_t i = 1; i + 1 < g.n_points; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h3;
    return w;
}

// Continuation state ready for kernel sums: Simpson weight times density.
struct ConvState {
    Grid grid;
    std::vector<double> weighted;
};

inline ConvState make_state(const GridDensity& cont) {
    ConvState st;
    st.grid = cont.grid;
    st.weighted = simpson_weights(cont.grid);
    for (std::size_t j = 0; j < st.weighted.size(); ++j) st.weighted[j] *= cont.values[j];
    return st;
}

// f_d(t) = int kernel(t | s) f_{d-1}(s) ds over the continuation region,
// where T_(d) = a * T_(d-1) + b * Z_d and Z_d ~ N(zeta, 1).
inline double convolve_at(const ConvState& st, double a, double b, double zeta, double t) {
    double acc = 0.0;
    const Grid& g = st.grid;
    const double h = g.spacing();
    const double base = t - b * zeta;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double s = g.lo + h * static_cast<double>(j);
        acc += st.weighted[j] * std_pdf((base - a * s) / b);
    }
    return acc / b;
}

inline std::vector<double> tabulate_conv(const ConvState& st, double a, double b,
                                         double zeta, const Grid& target) {
    std::vector<double> out(target.n_points);
    for (std::size_t i = 0; i < target.n_points; ++i) {
        out[i] = convolve_at(st, a, b, zeta, target.point(i));
    }
    return out;
}

} // namespace gseq::detail
