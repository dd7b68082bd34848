#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace mobw {

double normal_cdf(double x);

// Standard normal quantile, accurate to ~1e-15 (rational approximation
// refined by one Halley step on erfc).
double normal_quantile(double p);

// Asymptotic Kolmogorov tail probability P(sup|B(t)| > t_stat) via the
// alternating series, truncated at 100 terms.
double kolmogorov_p(double t_stat);

// Profile MLE of a Weibull (shape, rate) on a complete i.i.d. sample.
// Throws on n < 2 or a degenerate (all-equal) sample.
std::pair<double, double> weibull_complete_mle(const std::vector<double>& x);

struct KsResult {
  double D = 0.0;
  double p_value = 0.0;
  double shape = 0.0;
  double rate = 0.0;
};

// Kolmogorov-Smirnov distance of the sample against the Weibull fitted to it
// by MLE, with the plain asymptotic p-value at sqrt(n)*D (no correction for
// estimated parameters).
KsResult ks_gof(std::vector<double> sample);

// K-S distance of a sorted sample against an arbitrary CDF evaluated at the
// sample points.
double ks_statistic(const std::vector<double>& sorted_sample,
                    const std::vector<double>& cdf_at_points);

}  // namespace mobw
