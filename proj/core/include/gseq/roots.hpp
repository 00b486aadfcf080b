#pragma once

#include <functional>

namespace gseq {

struct RootResult {
    double root = 0.0;
    int iterations = 0;
    double residual = 0.0; // f(root)
};

/// Brent's method on a bracketing interval [lo, hi]: inverse quadratic
/// interpolation with bisection fallback, never leaves the bracket.
/// Terminates when the bracket width falls below tol (plus a machine-eps
/// floor). Throws validation_error if f(lo), f(hi) do not straddle zero and
/// numeric_error if f returns a non-finite value.
RootResult find_root(const std::function<double(double)>& f, double lo,
                     double hi, double tol = 1e-10);

} // namespace gseq
