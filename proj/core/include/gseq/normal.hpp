#pragma once

#include <limits>

namespace gseq {

/// Density of N(mu, sigma^2) at x.
double normal_pdf(double x, double mu = 0.0, double sigma = 1.0);

/// Distribution function of N(mu, sigma^2) at x. Computed through erfc so
/// both tails keep full relative accuracy (absolute error < 1e-15).
double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);

/// Upper tail Pr(X > x) for N(mu, sigma^2), accurate in the far tail.
double normal_sf(double x, double mu = 0.0, double sigma = 1.0);

/// Standard normal quantile, p in (0,1). Wichura-style rational
/// approximation polished with one Halley step on normal_cdf;
/// |normal_cdf(result) - p| <= 1e-15 over the full range.
double normal_quantile(double p);

/// Normal distribution truncated to [lower, upper]; either bound may be
/// infinite. Holds the components of the stopped-statistic mixtures.
class TruncatedNormal {
public:
    TruncatedNormal(double mu, double sigma,
                    double lower = -std::numeric_limits<double>::infinity(),
                    double upper = std::numeric_limits<double>::infinity());

    double pdf(double x) const;
    double cdf(double x) const;
    double mean() const;

    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }

private:
    double mu_, sigma_, lower_, upper_;
    double denom_; // Phi((upper-mu)/sigma) - Phi((lower-mu)/sigma)
};

} // namespace gseq
