#pragma once

#include <array>
#include <utility>
#include <vector>

#include "mobw/censoring.hpp"
#include "mobw/mat4.hpp"
#include "mobw/params.hpp"

namespace mobw {

// A(alpha) = sum_i (1 + R_i) y_i^alpha + rstar * y_m^alpha together with its
// first two alpha-derivatives. Satisfies A > 0, A'' >= 0 and
// A*A'' - (A')^2 >= 0 (Cauchy-Schwarz) for every alpha.
struct AlphaFunctionals {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

AlphaFunctionals alpha_functionals(const CensoredSample& s, double alpha);

// Log likelihood up to the parameter-free combinatorial constant:
//   m log a + m0 log l0 + m1 log l1 + m2 log l2 + m3 log l012
//   + (a-1) sum log y_i - l012 * A(a)
// with 0*log 0 := 0; lambda0 == 0 with m0 > 0 gives -infinity.
double log_likelihood(const MobwParams& p, const CensoredSample& s);

struct LambdaMle {
  std::array<double, 3> lambda{};  // l0, l1, l2
  bool boundary = false;           // some count was zero -> rate pinned at 0
};

// Closed-form rate MLEs for fixed shape: l_j = (m_j/m012) * (m/A(alpha)).
// Throws when every cause is masked (m012 == 0, non-identifiable).
LambdaMle conditional_lambda_mle(double alpha, const CauseCounts& counts,
                                 const CensoredSample& s);

struct AlphaSolveResult {
  double alpha = 0.0;
  int iterations = 0;
  bool converged = false;
  bool used_fallback = false;
  std::vector<double> trace;
};

// Shape MLE by the profile fixed point a = m / ((m/A)A' - sum log y), with a
// bracketed-bisection fallback on the profile score when the iteration
// oscillates or leaves (0, 50]. The returned alpha is polished until the
// profile score m/a + sum log y - (m/A)A' is below 1e-9 in magnitude.
AlphaSolveResult solve_alpha_fixed_point(const CensoredSample& s,
                                         double alpha0 = 1.0,
                                         double eps = 1e-6,
                                         int max_iter = 1000);

// Profile score whose root is the shape MLE.
double profile_score(const CensoredSample& s, double alpha);

// Moment-style starting value for the shape: median-rank regression of
// log(-log(1 - F_i)) on log y_i over the observed failures. Rough by
// construction (censoring is ignored), good enough to seed the fixed point.
double alpha_regression_start(const CensoredSample& s);

// Negated Hessian of the log likelihood at interior parameters, in the order
// (lambda0, lambda1, lambda2, alpha). Throws if any rate is on the boundary.
Mat4 observed_fisher(const MobwParams& p, const CensoredSample& s);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool valid = false;
};

struct FitConfig {
  double gamma = 0.05;        // two-sided non-coverage level of the intervals
  double alpha0 = 1.0;        // fixed-point start
  double eps = 1e-6;
  int max_iter = 1000;
  bool truncate_at_zero = false;  // clamp interval lower endpoints at 0
};

struct FitResult {
  MobwParams estimates;
  Mat4 fisher;       // rows/cols ordered (l0, l1, l2, alpha)
  Mat4 covariance;   // inverse on the identified block, NaN elsewhere
  std::array<Interval, 4> acis;  // same order
  double gamma = 0.05;
  int iterations = 0;
  bool converged = false;
  bool boundary = false;   // some rate estimated at 0, its interval suppressed
  double fisher_condition = 0.0;  // 1-norm condition of the identified block
};

// Full maximum-likelihood fit: profile shape, closed-form rates, observed
// information, covariance and normal-approximation intervals.
FitResult fit_mle(const CensoredSample& s, const FitConfig& config = {});

}  // namespace mobw
