#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mobw {

// Weibull with shape alpha and rate lambda: S(v) = exp(-lambda * v^alpha).

inline void check_weibull_args(double alpha, double lambda, double v) {
  if (!(alpha > 0.0) || !(lambda > 0.0)) {
    throw std::invalid_argument("weibull: alpha and lambda must be > 0");
  }
  if (!(v >= 0.0)) {
    throw std::invalid_argument("weibull: v must be >= 0");
  }
}

inline double weibull_cdf(double v, double alpha, double lambda) {
  check_weibull_args(alpha, lambda, v);
  return -std::expm1(-lambda * std::pow(v, alpha));
}

inline double weibull_sf(double v, double alpha, double lambda) {
  check_weibull_args(alpha, lambda, v);
  return std::exp(-lambda * std::pow(v, alpha));
}

// Density. At v=0 the value is 0 for alpha>1, alpha*lambda for alpha==1 and
// +infinity for alpha<1 (returned as a sentinel, not an error: likelihood
// code only ever evaluates at observed times > 0).
inline double weibull_pdf(double v, double alpha, double lambda) {
  check_weibull_args(alpha, lambda, v);
  if (v == 0.0) {
    if (alpha > 1.0) return 0.0;
    if (alpha == 1.0) return alpha * lambda;
    return std::numeric_limits<double>::infinity();
  }
  return alpha * lambda * std::pow(v, alpha - 1.0) *
         std::exp(-lambda * std::pow(v, alpha));
}

// Inverse CDF, u in [0,1).
inline double weibull_quantile(double u, double alpha, double lambda) {
  check_weibull_args(alpha, lambda, 0.0);
  if (!(u >= 0.0) || !(u < 1.0)) {
    throw std::invalid_argument("weibull_quantile: u must be in [0,1)");
  }
  return std::pow(-std::log1p(-u) / lambda, 1.0 / alpha);
}

}  // namespace mobw
