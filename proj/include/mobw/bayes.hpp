#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mobw/censoring.hpp"
#include "mobw/rng.hpp"

namespace mobw {

// Gamma prior (a,b) on the rate sum, Dirichlet (d0,d1,d2) on the rate
// proportions, gamma (a1,b1) on the shape.
struct PriorSpec {
  double a = 0.001;
  double b = 0.001;
  double d0 = 0.001;
  double d1 = 0.001;
  double d2 = 0.001;
  double a1 = 0.001;
  double b1 = 0.001;

  void validate() const;

  // All hyperparameters set to the same small positive value: h = 0.001 is
  // the simulation-study default, 0.0001 the data-analysis default.
  static PriorSpec diffuse(double h) { return {h, h, h, h, h, h, h}; }
};

struct PosteriorDraws {
  // Each record is (alpha, lambda0, lambda1, lambda2).
  std::vector<std::array<double, 4>> draws;
  int burn_in = 0;
  std::uint64_t seed = 0;
};

struct LossSpec {
  enum class Kind { kSquaredError, kLinex };
  Kind kind = Kind::kSquaredError;
  double p = 0.5;  // LINEX asymmetry, must be nonzero for kLinex

  void validate() const;
};

// Unnormalized log marginal posterior of the shape:
//   (m + a1 - 1) log a - a (b1 - sum log y) - (a + m) log(b + A(alpha)).
// Log-concave on (0, inf).
double log_marginal_posterior_alpha(double alpha, const CensoredSample& s,
                                    const PriorSpec& prior);

// Exact rejection sampler for the shape's marginal posterior. Builds the
// dominating envelope once (uniform cap between the two points one log-unit
// below the mode, exponential tails from the extended chords) and can then
// be reused for any number of draws.
class AlphaSampler {
 public:
  AlphaSampler(const CensoredSample& s, const PriorSpec& prior);

  double sample(RngStream& rng);
  double mode() const { return mode_; }
  double acceptance_rate() const {
    return proposals_ == 0 ? 1.0 : static_cast<double>(accepts_) / proposals_;
  }
  long proposals() const { return proposals_; }

 private:
  double log_post(double alpha) const;
  double log_post_d1(double alpha) const;

  std::vector<double> log_y_;
  std::vector<double> weight_;
  double sum_log_y_ = 0.0;
  int m_ = 0;
  PriorSpec prior_;

  double mode_ = 1.0;
  double log_post_mode_ = 0.0;
  double left_ = 0.0;    // abscissa one log-unit below the mode, left side
  double right_ = 0.0;   // same, right side
  long proposals_ = 0;
  long accepts_ = 0;
};

// One-shot convenience draw (builds a fresh envelope; prefer AlphaSampler or
// run_gibbs for repeated use).
double sample_alpha(const CensoredSample& s, const PriorSpec& prior,
                    RngStream& rng);

// Exact draw of (lambda0, lambda1, lambda2) given the shape: the rate sum is
// Gamma(a+m, b+A(alpha)) and the proportions Dirichlet(m1+d1, m2+d2, m0+d0).
std::array<double, 3> sample_lambdas_given_alpha(double alpha,
                                                 const CensoredSample& s,
                                                 const PriorSpec& prior,
                                                 RngStream& rng);

// M retained joint draws after burn_in discarded. Deterministic under the
// stream's seed.
PosteriorDraws run_gibbs(const CensoredSample& s, const PriorSpec& prior,
                         int M, int burn_in, RngStream& rng);

// Point estimate of W(theta) over the draws: posterior mean under squared
// error, -(1/p) log mean exp(-p W) (via log-sum-exp) under LINEX.
double bayes_estimate(const PosteriorDraws& draws, const LossSpec& loss,
                      const std::function<double(const std::array<double, 4>&)>& W);

// Coordinate shortcut, coord indexes (alpha, lambda0, lambda1, lambda2).
double bayes_estimate(const PosteriorDraws& draws, const LossSpec& loss,
                      int coord);

enum class HpdWindow {
  kStandard,  // window length floor((1-gamma) * M)
  kWide       // window length floor((1-gamma/2) * M)
};

// Shortest order-statistic window covering the requested posterior mass.
// Ties break toward the smallest starting index.
std::pair<double, double> hpd_interval(std::vector<double> coordinate_draws,
                                       double gamma,
                                       HpdWindow window = HpdWindow::kStandard);

// Scale-reduction-style diagnostic that treats each 4-parameter draw as a
// tiny chain: with W the mean within-draw variance across the four
// coordinates and B the between-draw variance of the coordinate means,
// G = sqrt(((3/4)W + ((M+1)/(4M))B) / W). Close to 1 for converged samples.
double gelman_G(const PosteriorDraws& draws);

// Conventional per-parameter potential scale reduction over several
// independently seeded runs. Returns one factor per coordinate
// (alpha, lambda0, lambda1, lambda2).
std::array<double, 4> gelman_G_standard(const std::vector<PosteriorDraws>& chains);

}  // namespace mobw
