#include "oracles.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>

namespace oracle {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;
constexpr long double kSqrtPi = 1.77245385090551602729816748334114518L;

// Alternating Taylor series: erf(x) = 2/sqrt(pi) sum (-1)^n x^(2n+1)/(n!(2n+1)).
long double erf_series(long double x) {
    const long double x2 = x * x;
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / static_cast<long double>(n);
        const long double add = term / static_cast<long double>(2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
    }
    return 2.0L / kSqrtPi * sum;
}

// Lentz's algorithm on erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + (2/2)/(x + ...))).
long double erfc_cf(long double x) {
    const long double tiny = 1e-30L;
    long double f = x, c = x, d = 0.0L;
    for (int n = 1; n < 300; ++n) {
        const long double a = static_cast<long double>(n) / 2.0L;
        d = x + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0L / d;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-20L) break;
    }
    return std::exp(-x * x) / (kSqrtPi * f);
}

} // namespace

long double erf_ld(long double x) {
    if (x < 0.0L) return -erf_ld(-x);
    if (x <= 3.0L) return erf_series(x);
    return 1.0L - erfc_cf(x);
}

long double std_normal_cdf(long double x) {
    const long double r = 0.707106781186547524400844362104849039L; // 1/sqrt(2)
    if (x >= 0.0L) return 0.5L * (1.0L + erf_ld(x * r));
    // keep relative accuracy in the lower tail
    if (x < -3.0L * 1.414213562373095L) return 0.5L * erfc_cf(-x * r);
    return 0.5L * (1.0L - erf_ld(-x * r));
}

long double std_normal_pdf(long double x) {
    return std::exp(-0.5L * x * x) / std::sqrt(2.0L * kPi);
}

long double std_normal_quantile(long double p) {
    if (!(p > 0.0L) || !(p < 1.0L)) throw std::invalid_argument("quantile: p in (0,1)");
    long double lo = -40.0L, hi = 40.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (std_normal_cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

long double left_truncated_mean(long double c) {
    return std_normal_pdf(c) / (1.0L - std_normal_cdf(c));
}

long double simpson_ld(const std::function<long double(long double)>& f, long double lo,
                       long double hi, std::size_t n_points) {
    if (n_points < 3 || n_points % 2 == 0) throw std::invalid_argument("odd points");
    const long double h = (hi - lo) / static_cast<long double>(n_points - 1);
    long double sum = f(lo) + f(hi);
    for (std::size_t i = 1; i + 1 < n_points; ++i) {
        sum += (i % 2 == 1 ? 4.0L : 2.0L) * f(lo + h * static_cast<long double>(i));
    }
    return h / 3.0L * sum;
}

long double bivariate_stage2_cdf(long double c1, long double v, long double d1,
                                 long double d2, long double n1, long double n2,
                                 std::size_t outer_points, std::size_t inner_points) {
    const long double w = std::sqrt(n1 + n2);
    const long double z1_lo = d1 - 9.0L;
    const long double z1_hi = c1;
    if (z1_lo >= z1_hi) return 0.0L;
    auto outer = [&](long double z1) -> long double {
        // T2 = (sqrt(n1) z1 + sqrt(n2) z2)/sqrt(n1+n2) <= v
        long double z2_hi = (v * w - std::sqrt(n1) * z1) / std::sqrt(n2);
        z2_hi = std::min(z2_hi, d2 + 9.0L); // no mass beyond
        const long double z2_lo = d2 - 9.0L;
        if (z2_hi <= z2_lo) return 0.0L;
        auto inner = [&](long double z2) { return std_normal_pdf(z2 - d2); };
        return std_normal_pdf(z1 - d1) * simpson_ld(inner, z2_lo, z2_hi, inner_points);
    };
    return simpson_ld(outer, z1_lo, z1_hi, outer_points);
}

} // namespace oracle
