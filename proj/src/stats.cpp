#include "mobw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mobw {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation (~1e-9), used as the seed for refinement.
double normal_quantile_seed(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  }
  double x = normal_quantile_seed(p);
  // One Halley step: drives the residual to full double precision.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double kolmogorov_p(double t_stat) {
  if (t_stat <= 0.0) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t_stat * t_stat);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

std::pair<double, double> weibull_complete_mle(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("weibull_complete_mle: need n >= 2");
  double slog = 0.0;
  for (double v : x) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("weibull_complete_mle: values must be > 0");
    }
    slog += std::log(v);
  }
  if (*std::max_element(x.begin(), x.end()) ==
      *std::min_element(x.begin(), x.end())) {
    throw std::invalid_argument("weibull_complete_mle: degenerate sample");
  }
  const double mean_log = slog / static_cast<double>(n);

  auto score = [&](double a) {
    double s = 0.0, sl = 0.0;
    for (double v : x) {
      const double w = std::pow(v, a);
      s += w;
      sl += w * std::log(v);
    }
    return 1.0 / a + mean_log - sl / s;
  };
  // The score is strictly decreasing in the shape; bracket then bisect.
  double lo = 1e-6, hi = 1.0;
  while (score(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("weibull_complete_mle: no root");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (score(mid) > 0.0 ? lo : hi) = mid;
  }
  const double shape = 0.5 * (lo + hi);
  double s = 0.0;
  for (double v : x) s += std::pow(v, shape);
  return {shape, static_cast<double>(n) / s};
}

double ks_statistic(const std::vector<double>& sorted_sample,
                    const std::vector<double>& cdf_at_points) {
  const std::size_t n = sorted_sample.size();
  double D = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double F = cdf_at_points[i];
    D = std::max(D, std::fabs(F - static_cast<double>(i + 1) / n));
    D = std::max(D, std::fabs(F - static_cast<double>(i) / n));
  }
  return D;
}

KsResult ks_gof(std::vector<double> sample) {
  const auto [shape, rate] = weibull_complete_mle(sample);
  std::sort(sample.begin(), sample.end());
  std::vector<double> F(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    F[i] = -std::expm1(-rate * std::pow(sample[i], shape));
  }
  KsResult r;
  r.shape = shape;
  r.rate = rate;
  r.D = ks_statistic(sample, F);
  r.p_value = kolmogorov_p(std::sqrt(static_cast<double>(sample.size())) * r.D);
  return r;
}

}  // namespace mobw
