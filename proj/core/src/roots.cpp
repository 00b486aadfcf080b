#include "gseq/roots.hpp"

#include <cmath>
#include <limits>

#include "gseq/errors.hpp"

namespace gseq {

RootResult find_root(const std::function<double(double)>& f, double lo,
                     double hi, double tol) {
    if (!(tol > 0.0)) throw validation_error("find_root: tol must be positive");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw validation_error("find_root: need finite lo < hi");
    }

    auto eval = [&](double x) {
        const double v = f(x);
        if (std::isnan(v)) throw numeric_error("find_root: f returned NaN");
        return v;
    };

    double a = lo, b = hi;
    double fa = eval(a), fb = eval(b);
    if (fa == 0.0) return {a, 0, 0.0};
    if (fb == 0.0) return {b, 0, 0.0};
    if ((fa > 0.0) == (fb > 0.0)) {
        throw validation_error("find_root: f(lo) and f(hi) must have opposite signs");
    }

    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();
    const int max_iter = 200;

    for (int iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) {
            return {b, iter, fb};
        }
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // Inverse quadratic interpolation (secant if only two points).
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
            const double min2 = std::fabs(e * q);
            if (2.0 * p < (min1 < min2 ? min1 : min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        if (std::fabs(d) > tol1) {
            b += d;
        } else {
            b += xm > 0.0 ? tol1 : -tol1;
        }
        fb = eval(b);
    }
    throw numeric_error("find_root: bracket did not close within iteration limit");
}

} // namespace gseq
