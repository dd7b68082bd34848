#include "mobw/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mobw/likelihood.hpp"

namespace mobw {

void PriorSpec::validate() const {
  for (double v : {a, b, d0, d1, d2, a1, b1}) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("PriorSpec: hyperparameters must be > 0");
    }
  }
}

void LossSpec::validate() const {
  if (kind == Kind::kLinex && p == 0.0) {
    throw std::invalid_argument("LossSpec: LINEX requires p != 0");
  }
}

double log_marginal_posterior_alpha(double alpha, const CensoredSample& s,
                                    const PriorSpec& prior) {
  prior.validate();
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("log_marginal_posterior_alpha: alpha <= 0");
  }
  double slog = 0.0;
  for (double y : s.times) slog += std::log(y);
  const double A = alpha_functionals(s, alpha).value;
  const double m = s.m();
  return (m + prior.a1 - 1.0) * std::log(alpha) - alpha * (prior.b1 - slog) -
         (prior.a + m) * std::log(prior.b + A);
}

AlphaSampler::AlphaSampler(const CensoredSample& s, const PriorSpec& prior)
    : prior_(prior) {
  prior.validate();
  s.validate();
  m_ = s.m();
  log_y_.reserve(m_);
  weight_.reserve(m_);
  for (int i = 0; i < m_; ++i) {
    log_y_.push_back(std::log(s.times[i]));
    weight_.push_back(1.0 + s.applied_removals[i]);
    sum_log_y_ += log_y_.back();
  }
  weight_.back() += s.rstar;

  // Mode: the derivative of the log posterior is strictly decreasing, so a
  // sign change brackets it; safeguarded Newton finishes the job.
  double lo = 1e-4, hi = 50.0;
  while (log_post_d1(hi) > 0.0) {
    hi *= 10.0;
    if (hi > 5e4) {
      throw std::runtime_error("AlphaSampler: posterior mode beyond 5e4");
    }
  }
  while (log_post_d1(lo) < 0.0) {
    lo *= 0.1;
    if (lo < 1e-12) {
      throw std::runtime_error("AlphaSampler: posterior mode below 1e-12");
    }
  }
  double x = std::clamp(1.0, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double d1 = log_post_d1(x);
    if (std::fabs(d1) < 1e-10 && it > 0) break;
    // Numeric second derivative is avoided: use a secant-flavored bisection.
    (d1 > 0.0 ? lo : hi) = x;
    const double mid = 0.5 * (lo + hi);
    x = mid;
    if (hi - lo < 1e-14 * hi) break;
  }
  mode_ = x;
  log_post_mode_ = log_post(mode_);

  // Log-concavity sanity check on a grid spanning the mode; a violation
  // beyond the 1e-9 slack means the density cannot be trusted: abort.
  {
    const double g_lo = std::max(1e-6, mode_ / 50.0);
    const double g_hi = mode_ * 50.0;
    const int n = 101;
    std::vector<double> lp(n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = g_lo + (g_hi - g_lo) * i / (n - 1.0);
      lp[i] = log_post(a);
      scale = std::max(scale, std::fabs(lp[i]));
    }
    // slack covers cancellation noise in second differences of large values
    const double slack = 1e-9 + 4e-13 * scale;
    for (int i = 1; i + 1 < n; ++i) {
      const double second = lp[i + 1] - 2.0 * lp[i] + lp[i - 1];
      if (second > slack) {
        std::ostringstream msg;
        msg << "AlphaSampler: log-concavity violated near alpha="
            << g_lo + (g_hi - g_lo) * i / (n - 1.0) << " (second difference "
            << second << ")";
        throw std::runtime_error(msg.str());
      }
    }
  }

  // Envelope anchor points one log-unit below the mode on each side.
  const double target = log_post_mode_ - 1.0;
  auto bisect_to_target = [&](double below, double above) {
    // log_post(below) < target <= log_post(above); orientation-agnostic.
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (below + above);
      (log_post(mid) >= target ? above : below) = mid;
    }
    return 0.5 * (below + above);
  };
  {
    double a = mode_ * 0.5;
    while (log_post(a) > target) a *= 0.5;
    left_ = bisect_to_target(a, mode_);
    double b = mode_ * 2.0;
    while (log_post(b) > target) b *= 2.0;
    right_ = bisect_to_target(b, mode_);
  }
}

double AlphaSampler::log_post(double alpha) const {
  double A = 0.0;
  for (std::size_t i = 0; i < log_y_.size(); ++i) {
    A += weight_[i] * std::exp(alpha * log_y_[i]);
  }
  return (m_ + prior_.a1 - 1.0) * std::log(alpha) -
         alpha * (prior_.b1 - sum_log_y_) -
         (prior_.a + m_) * std::log(prior_.b + A);
}

double AlphaSampler::log_post_d1(double alpha) const {
  double A = 0.0, A1 = 0.0;
  for (std::size_t i = 0; i < log_y_.size(); ++i) {
    const double v = weight_[i] * std::exp(alpha * log_y_[i]);
    A += v;
    A1 += v * log_y_[i];
  }
  return (m_ + prior_.a1 - 1.0) / alpha - (prior_.b1 - sum_log_y_) -
         (prior_.a + m_) * A1 / (prior_.b + A);
}

double AlphaSampler::sample(RngStream& rng) {
  // Piece masses relative to exp(log_post_mode): the cap spans
  // [left, right] at height 1, each tail integrates to width/e.
  const double wl = mode_ - left_;
  const double wr = right_ - mode_;
  const double cap = wl + wr;
  const double total = cap + (wl + wr) / std::exp(1.0);
  for (;;) {
    ++proposals_;
    const double u = rng.uniform() * total;
    double x, log_env;
    if (u < cap) {
      x = left_ + rng.uniform() * cap;
      log_env = log_post_mode_;
    } else if (u < cap + wr / std::exp(1.0)) {
      x = right_ + wr * rng.exponential();
      log_env = log_post_mode_ - (x - mode_) / wr;
    } else {
      x = left_ - wl * rng.exponential();
      if (x <= 0.0) continue;
      log_env = log_post_mode_ - (mode_ - x) / wl;
    }
    if (std::log(rng.uniform()) < log_post(x) - log_env) {
      ++accepts_;
      return x;
    }
  }
}

double sample_alpha(const CensoredSample& s, const PriorSpec& prior,
                    RngStream& rng) {
  AlphaSampler sampler(s, prior);
  return sampler.sample(rng);
}

std::array<double, 3> sample_lambdas_given_alpha(double alpha,
                                                 const CensoredSample& s,
                                                 const PriorSpec& prior,
                                                 RngStream& rng) {
  prior.validate();
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("sample_lambdas_given_alpha: alpha <= 0");
  }
  const CauseCounts c = count_causes(s);
  const double A = alpha_functionals(s, alpha).value;
  const double rate_sum = rng.gamma(prior.a + c.total(), prior.b + A);
  const double g1 = rng.gamma(c.m1 + prior.d1);
  const double g2 = rng.gamma(c.m2 + prior.d2);
  const double g0 = rng.gamma(c.m0 + prior.d0);
  const double gs = g0 + g1 + g2;
  return {rate_sum * g0 / gs, rate_sum * g1 / gs, rate_sum * g2 / gs};
}

PosteriorDraws run_gibbs(const CensoredSample& s, const PriorSpec& prior,
                         int M, int burn_in, RngStream& rng) {
  if (M < 1) throw std::invalid_argument("run_gibbs: M must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("run_gibbs: burn_in < 0");
  AlphaSampler alpha_sampler(s, prior);
  PosteriorDraws out;
  out.burn_in = burn_in;
  out.draws.reserve(M);
  for (int t = 0; t < burn_in + M; ++t) {
    const double alpha = alpha_sampler.sample(rng);
    const std::array<double, 3> lam =
        sample_lambdas_given_alpha(alpha, s, prior, rng);
    if (t >= burn_in) out.draws.push_back({alpha, lam[0], lam[1], lam[2]});
  }
  return out;
}

double bayes_estimate(
    const PosteriorDraws& draws, const LossSpec& loss,
    const std::function<double(const std::array<double, 4>&)>& W) {
  loss.validate();
  if (draws.draws.empty()) {
    throw std::invalid_argument("bayes_estimate: no draws");
  }
  const double M = static_cast<double>(draws.draws.size());
  if (loss.kind == LossSpec::Kind::kSquaredError) {
    double s = 0.0;
    for (const auto& d : draws.draws) s += W(d);
    return s / M;
  }
  // LINEX via log-sum-exp so that large |p| cannot overflow.
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(draws.draws.size());
  for (const auto& d : draws.draws) {
    terms.push_back(-loss.p * W(d));
    max_term = std::max(max_term, terms.back());
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - max_term);
  return -(max_term + std::log(s / M)) / loss.p;
}

double bayes_estimate(const PosteriorDraws& draws, const LossSpec& loss,
                      int coord) {
  if (coord < 0 || coord > 3) {
    throw std::invalid_argument("bayes_estimate: coord must be 0..3");
  }
  return bayes_estimate(
      draws, loss, [coord](const std::array<double, 4>& d) { return d[coord]; });
}

std::pair<double, double> hpd_interval(std::vector<double> coordinate_draws,
                                       double gamma, HpdWindow window) {
  const std::size_t M = coordinate_draws.size();
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument("hpd_interval: gamma must be in (0,1)");
  }
  const double frac = window == HpdWindow::kStandard ? 1.0 - gamma
                                                     : 1.0 - gamma / 2.0;
  const std::size_t w = static_cast<std::size_t>(std::floor(frac * M));
  if (w < 2 || w >= M) {
    throw std::invalid_argument(
        "hpd_interval: window does not fit the number of draws");
  }
  std::sort(coordinate_draws.begin(), coordinate_draws.end());
  std::size_t best_j = 0;
  double best_width = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + w < M; ++j) {
    const double width = coordinate_draws[j + w] - coordinate_draws[j];
    if (width < best_width) {
      best_width = width;
      best_j = j;
    }
  }
  return {coordinate_draws[best_j], coordinate_draws[best_j + w]};
}

double gelman_G(const PosteriorDraws& draws) {
  const std::size_t M = draws.draws.size();
  if (M < 2) throw std::invalid_argument("gelman_G: need at least two draws");
  std::vector<double> mean_j(M), var_j(M);
  for (std::size_t j = 0; j < M; ++j) {
    const auto& d = draws.draws[j];
    const double mean = (d[0] + d[1] + d[2] + d[3]) / 4.0;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    mean_j[j] = mean;
    var_j[j] = ss / 3.0;
  }
  double W = 0.0, grand = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    W += var_j[j];
    grand += mean_j[j];
  }
  W /= static_cast<double>(M);
  grand /= static_cast<double>(M);
  if (W == 0.0) {
    throw std::runtime_error(
        "gelman_G: zero within-draw variance, diagnostic undefined");
  }
  double B = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    B += (mean_j[j] - grand) * (mean_j[j] - grand);
  }
  B *= 4.0 / (static_cast<double>(M) - 1.0);
  const double V =
      0.75 * W + (static_cast<double>(M) + 1.0) / (4.0 * M) * B;
  return std::sqrt(V / W);
}

std::array<double, 4> gelman_G_standard(
    const std::vector<PosteriorDraws>& chains) {
  const std::size_t c = chains.size();
  if (c < 2) {
    throw std::invalid_argument("gelman_G_standard: need >= 2 chains");
  }
  std::size_t n = std::numeric_limits<std::size_t>::max();
  for (const auto& ch : chains) n = std::min(n, ch.draws.size());
  if (n < 2) {
    throw std::invalid_argument("gelman_G_standard: chains too short");
  }
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    std::vector<double> means(c), vars(c);
    for (std::size_t i = 0; i < c; ++i) {
      double mean = 0.0;
      for (std::size_t t = 0; t < n; ++t) mean += chains[i].draws[t][k];
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double d = chains[i].draws[t][k] - mean;
        ss += d * d;
      }
      means[i] = mean;
      vars[i] = ss / (static_cast<double>(n) - 1.0);
    }
    double grand = 0.0, W = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
      grand += means[i];
      W += vars[i];
    }
    grand /= static_cast<double>(c);
    W /= static_cast<double>(c);
    double B = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
      B += (means[i] - grand) * (means[i] - grand);
    }
    B *= static_cast<double>(n) / (static_cast<double>(c) - 1.0);
    const double var_plus =
        (static_cast<double>(n) - 1.0) / static_cast<double>(n) * W +
        B / static_cast<double>(n);
    out[k] = std::sqrt(var_plus / W);
  }
  return out;
}

}  // namespace mobw
