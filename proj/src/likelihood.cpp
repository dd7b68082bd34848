#include "mobw/likelihood.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mobw/stats.hpp"

namespace mobw {

namespace {

// Per-observation weights for the A functional: 1 + applied removal, with the
// terminal removals attached to the last failure.
std::vector<double> a_weights(const CensoredSample& s) {
  std::vector<double> w(s.times.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = 1.0 + s.applied_removals[i];
  }
  w.back() += s.rstar;
  return w;
}

double sum_log_times(const CensoredSample& s) {
  double t = 0.0;
  for (double y : s.times) t += std::log(y);
  return t;
}

}  // namespace

AlphaFunctionals alpha_functionals(const CensoredSample& s, double alpha) {
  if (s.times.empty()) {
    throw std::invalid_argument("alpha_functionals: empty sample");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("alpha_functionals: alpha must be > 0");
  }
  AlphaFunctionals f;
  const std::vector<double> w = a_weights(s);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double ly = std::log(s.times[i]);
    const double v = w[i] * std::exp(alpha * ly);
    f.value += v;
    f.d1 += v * ly;
    f.d2 += v * ly * ly;
  }
  return f;
}

double log_likelihood(const MobwParams& p, const CensoredSample& s) {
  p.validate();
  if (s.times.empty()) {
    throw std::invalid_argument("log_likelihood: empty sample");
  }
  const CauseCounts c = count_causes(s);
  const double l012 = p.lambda012();

  double ll = s.m() * std::log(p.alpha);
  if (c.m0 > 0) {
    if (p.lambda0 == 0.0) return -std::numeric_limits<double>::infinity();
    ll += c.m0 * std::log(p.lambda0);
  }
  if (c.m1 > 0) ll += c.m1 * std::log(p.lambda1);
  if (c.m2 > 0) ll += c.m2 * std::log(p.lambda2);
  if (c.m3 > 0) ll += c.m3 * std::log(l012);
  ll += (p.alpha - 1.0) * sum_log_times(s);
  ll -= l012 * alpha_functionals(s, p.alpha).value;
  return ll;
}

LambdaMle conditional_lambda_mle(double alpha, const CauseCounts& counts,
                                 const CensoredSample& s) {
  if (counts.m012() == 0) {
    throw std::runtime_error(
        "conditional_lambda_mle: every cause is masked, rates are not "
        "identifiable");
  }
  const double scale = static_cast<double>(counts.total()) /
                       (counts.m012() * alpha_functionals(s, alpha).value);
  LambdaMle r;
  r.lambda = {counts.m0 * scale, counts.m1 * scale, counts.m2 * scale};
  r.boundary = counts.m0 == 0 || counts.m1 == 0 || counts.m2 == 0;
  return r;
}

double profile_score(const CensoredSample& s, double alpha) {
  const AlphaFunctionals f = alpha_functionals(s, alpha);
  const double m = s.m();
  return m / alpha + sum_log_times(s) - (m / f.value) * f.d1;
}

double alpha_regression_start(const CensoredSample& s) {
  const int m = s.m();
  if (m < 2) {
    throw std::invalid_argument("alpha_regression_start: need >= 2 failures");
  }
  double sx = 0.0, sz = 0.0, sxx = 0.0, sxz = 0.0;
  for (int i = 0; i < m; ++i) {
    const double f = (i + 1 - 0.375) / (m + 0.25);  // median ranks
    const double x = std::log(s.times[i]);
    const double z = std::log(-std::log1p(-f));
    sx += x;
    sz += z;
    sxx += x * x;
    sxz += x * z;
  }
  const double denom = m * sxx - sx * sx;
  if (denom <= 0.0) {
    throw std::runtime_error("alpha_regression_start: degenerate times");
  }
  const double slope = (m * sxz - sx * sz) / denom;
  return std::max(slope, 1e-3);
}

AlphaSolveResult solve_alpha_fixed_point(const CensoredSample& s,
                                         double alpha0, double eps,
                                         int max_iter) {
  if (!(alpha0 > 0.0)) {
    throw std::invalid_argument("solve_alpha_fixed_point: alpha0 must be > 0");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("solve_alpha_fixed_point: eps must be > 0");
  }
  const double m = s.m();
  const double slog = sum_log_times(s);
  constexpr double kAlphaMax = 50.0;
  constexpr double kAlphaMin = 1e-4;

  auto h = [&](double a) {
    const AlphaFunctionals f = alpha_functionals(s, a);
    return m / ((m / f.value) * f.d1 - slog);
  };

  AlphaSolveResult res;
  res.trace.push_back(alpha0);
  double a = alpha0;
  double prev_step = std::numeric_limits<double>::infinity();
  int growth_count = 0;
  for (int k = 0; k < max_iter; ++k) {
    const double next = h(a);
    res.trace.push_back(next);
    ++res.iterations;
    if (!std::isfinite(next) || next <= 0.0 || next > kAlphaMax) break;
    const double step = std::fabs(next - a);
    if (step < eps) {
      a = next;
      res.converged = true;
      break;
    }
    growth_count = step > prev_step ? growth_count + 1 : 0;
    if (growth_count >= 3) break;  // oscillating / diverging
    prev_step = step;
    a = next;
  }

  if (!res.converged) {
    // Bisection on the profile score; the score is strictly decreasing in
    // alpha (Cauchy-Schwarz on the A functional), so one sign change settles it.
    res.used_fallback = true;
    double lo = kAlphaMin, hi = kAlphaMax;
    if (profile_score(s, lo) < 0.0 || profile_score(s, hi) > 0.0) {
      std::ostringstream msg;
      msg << "solve_alpha_fixed_point: no root of the profile score in ("
          << lo << ", " << hi << "); iterate trace:";
      for (double t : res.trace) msg << ' ' << t;
      throw std::runtime_error(msg.str());
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (profile_score(s, mid) > 0.0 ? lo : hi) = mid;
      ++res.iterations;
    }
    a = 0.5 * (lo + hi);
    res.converged = true;
  }

  // Polish to a tight root of the score (Newton, bisection-safeguarded).
  double lo = a * 0.5, hi = a * 2.0;
  while (profile_score(s, lo) < 0.0 && lo > 1e-8) lo *= 0.5;
  while (profile_score(s, hi) > 0.0 && hi < 1e4) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double sc = profile_score(s, a);
    if (std::fabs(sc) < 1e-9) break;
    const AlphaFunctionals f = alpha_functionals(s, a);
    const double dsc =
        -m / (a * a) - m * (f.d2 * f.value - f.d1 * f.d1) / (f.value * f.value);
    double next = a - sc / dsc;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    (profile_score(s, next) > 0.0 ? lo : hi) = next;
    a = next;
  }
  res.alpha = a;
  return res;
}

Mat4 observed_fisher(const MobwParams& p, const CensoredSample& s) {
  p.validate();
  if (!(p.lambda0 > 0.0)) {
    throw std::invalid_argument(
        "observed_fisher: parameters must be strictly interior (lambda0 > 0)");
  }
  const CauseCounts c = count_causes(s);
  const AlphaFunctionals f = alpha_functionals(s, p.alpha);
  const double l012 = p.lambda012();
  const double cross = c.m3 / (l012 * l012);
  const std::array<double, 3> lam = {p.lambda0, p.lambda1, p.lambda2};
  const std::array<int, 3> mj = {c.m0, c.m1, c.m2};

  Mat4 I;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      I(i, j) = cross;
    }
    I(i, i) += mj[i] / (lam[i] * lam[i]);
    I(i, 3) = I(3, i) = f.d1;
  }
  I(3, 3) = c.total() / (p.alpha * p.alpha) + l012 * f.d2;
  return I;
}

namespace {

// Inverts the sub-block of rows/cols in `active`; NaN elsewhere.
Mat4 invert_active_block(const Mat4& A, const std::array<bool, 4>& active) {
  int idx[4];
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    if (active[i]) idx[k++] = i;
  }
  // Gauss-Jordan on the k x k block.
  double a[4][8];
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) a[r][c] = A(idx[r], idx[c]);
    for (int c = 0; c < k; ++c) a[r][k + c] = (r == c) ? 1.0 : 0.0;
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == 0.0) {
      throw std::runtime_error("fit_mle: singular Fisher information block");
    }
    if (piv != col) {
      for (int c = 0; c < 2 * k; ++c) std::swap(a[piv][c], a[col][c]);
    }
    const double d = a[col][col];
    for (int c = 0; c < 2 * k; ++c) a[col][c] /= d;
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const double fmult = a[r][col];
      if (fmult == 0.0) continue;
      for (int c = 0; c < 2 * k; ++c) a[r][c] -= fmult * a[col][c];
    }
  }
  Mat4 out;
  out.a.fill(std::numeric_limits<double>::quiet_NaN());
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) out(idx[r], idx[c]) = a[r][k + c];
  }
  return out;
}

double condition_of_active(const Mat4& A, const std::array<bool, 4>& active) {
  auto norm1 = [&](const Mat4& M) {
    double best = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (!active[j]) continue;
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) {
        if (active[i]) sum += std::fabs(M(i, j));
      }
      best = std::max(best, sum);
    }
    return best;
  };
  return norm1(A) * norm1(invert_active_block(A, active));
}

}  // namespace

FitResult fit_mle(const CensoredSample& s, const FitConfig& config) {
  if (s.m() < 2) {
    throw std::invalid_argument("fit_mle: need at least two observed failures");
  }
  const CauseCounts counts = count_causes(s);
  if (counts.m012() < 1) {
    throw std::runtime_error("fit_mle: every cause is masked, not identifiable");
  }

  const AlphaSolveResult as =
      solve_alpha_fixed_point(s, config.alpha0, config.eps, config.max_iter);
  const LambdaMle lm = conditional_lambda_mle(as.alpha, counts, s);

  FitResult r;
  r.estimates = {as.alpha, lm.lambda[0], lm.lambda[1], lm.lambda[2]};
  r.gamma = config.gamma;
  r.iterations = as.iterations;
  r.converged = as.converged;
  r.boundary = lm.boundary;

  // Observed information at the estimate. Boundary rates (count 0) make the
  // corresponding row meaningless; those coordinates are dropped from the
  // covariance and their intervals suppressed.
  const AlphaFunctionals f = alpha_functionals(s, as.alpha);
  const double l012 =
      lm.lambda[0] + lm.lambda[1] + lm.lambda[2];
  const double cross = counts.m3 / (l012 * l012);
  const std::array<int, 3> mj = {counts.m0, counts.m1, counts.m2};
  std::array<bool, 4> active = {true, true, true, true};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r.fisher(i, j) = cross;
    if (mj[i] > 0) {
      r.fisher(i, i) += mj[i] / (lm.lambda[i] * lm.lambda[i]);
    } else {
      active[i] = false;
    }
    r.fisher(i, 3) = r.fisher(3, i) = f.d1;
  }
  r.fisher(3, 3) = counts.total() / (as.alpha * as.alpha) + l012 * f.d2;

  r.covariance = invert_active_block(r.fisher, active);
  r.fisher_condition = condition_of_active(r.fisher, active);

  const double z = normal_quantile(1.0 - config.gamma / 2.0);
  const std::array<double, 4> est = {lm.lambda[0], lm.lambda[1], lm.lambda[2],
                                     as.alpha};
  for (int i = 0; i < 4; ++i) {
    if (!active[i]) continue;  // suppressed: left invalid
    const double sd = std::sqrt(r.covariance(i, i));
    r.acis[i].lower = est[i] - z * sd;
    r.acis[i].upper = est[i] + z * sd;
    if (config.truncate_at_zero && r.acis[i].lower < 0.0) {
      r.acis[i].lower = 0.0;
    }
    r.acis[i].valid = true;
  }
  return r;
}

}  // namespace mobw
