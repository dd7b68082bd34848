#include <doctest.h>

#include <cmath>
#include <limits>

#include "mobw/datasets.hpp"
#include "mobw/likelihood.hpp"
#include "mobw/stats.hpp"
#include "oracles.hpp"

using namespace mobw;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CensoredSample simulated_sample(std::uint64_t seed, int n = 50, int m = 30,
                                double T = 0.5, double q = 0.1) {
  const MobwParams truth{1.0, 0.5, 1.0, 1.5};
  CensoringPlan plan{n, m, std::vector<int>(m, 0), T};
  plan.removals[m - 1] = n - m;
  RngStream rng(seed);
  CensoredSample s = generate_at2phcs(truth, plan, rng);
  return mask_causes(s, q, rng);
}

// 30 strictly increasing times with sum(y_i) == target at alpha = 1,
// no removals: A(1) == target.
CensoredSample synthetic_sum_sample(double target, const std::vector<int>& causes) {
  const int m = static_cast<int>(causes.size());
  std::vector<double> times(m);
  const double base = target / m;
  for (int i = 0; i < m; ++i) {
    times[i] = base + (i - (m - 1) / 2.0) * 1e-4;  // symmetric, sums exactly-ish
  }
  return make_censored_sample(m, kInf, times, causes, std::vector<int>(m, 0));
}

}  // namespace

TEST_CASE("log likelihood closed values") {
  SUBCASE("single observation, independence boundary") {
    // y = 1, cause 1, no removals, T > 1, params (a=1, l=(0,1,1)):
    // 1*log(1) + 1*log(1) + 0 - 2*1 = -2
    const CensoredSample s = make_censored_sample(1, 2.0, {1.0}, {1}, {0});
    const MobwParams p{1.0, 0.0, 1.0, 1.0};
    CHECK(log_likelihood(p, s) == doctest::Approx(-2.0).epsilon(1e-14));
  }

  SUBCASE("lambda0 = 0 with observed simultaneous failures is impossible") {
    const CensoredSample s = make_censored_sample(2, kInf, {0.5, 1.0}, {0, 1},
                                                  {0, 0});
    const MobwParams p{1.0, 0.0, 1.0, 1.0};
    CHECK(log_likelihood(p, s) == -kInf);
  }

  SUBCASE("empty sample throws") {
    CensoredSample s;
    const MobwParams p{1.0, 0.5, 1.0, 1.0};
    CHECK_THROWS(log_likelihood(p, s));
  }
}

TEST_CASE("alpha functionals") {
  const CensoredSample s = simulated_sample(42);

  SUBCASE("Cauchy-Schwarz inequality of the A functional") {
    for (double a = 0.2; a < 6.0; a += 0.2) {
      const AlphaFunctionals f = alpha_functionals(s, a);
      CHECK(f.value > 0.0);
      CHECK(f.d2 >= 0.0);
      CHECK(f.value * f.d2 - f.d1 * f.d1 >= 0.0);
    }
  }

  SUBCASE("derivatives match finite differences") {
    const double h = 1e-6;
    for (double a : {0.5, 1.0, 2.5}) {
      const AlphaFunctionals f = alpha_functionals(s, a);
      const double ap = alpha_functionals(s, a + h).value;
      const double am = alpha_functionals(s, a - h).value;
      CHECK(f.d1 == doctest::Approx((ap - am) / (2 * h)).epsilon(1e-6));
      CHECK(f.d2 ==
            doctest::Approx((ap - 2 * f.value + am) / (h * h)).epsilon(1e-3));
    }
  }
}

TEST_CASE("conditional rate MLE") {
  SUBCASE("equal counts, A = 30") {
    std::vector<int> causes(30);
    for (int i = 0; i < 30; ++i) causes[i] = i % 3;  // 10 of each
    const CensoredSample s = synthetic_sum_sample(30.0, causes);
    const double A = alpha_functionals(s, 1.0).value;
    const CauseCounts c = count_causes(s);
    const LambdaMle r = conditional_lambda_mle(1.0, c, s);
    // (10/30)*(30/A): A == 30 up to the tiny symmetric perturbations
    for (int j = 0; j < 3; ++j) {
      CHECK(r.lambda[j] == doctest::Approx(10.0 / A).epsilon(1e-12));
      CHECK(r.lambda[j] == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    }
    CHECK_FALSE(r.boundary);
  }

  SUBCASE("masked counts rescale by m/m012") {
    // counts (5, 10, 5, 10), A = 15 -> (0.5, 1.0, 0.5)
    std::vector<int> causes;
    for (int i = 0; i < 5; ++i) causes.push_back(0);
    for (int i = 0; i < 10; ++i) causes.push_back(1);
    for (int i = 0; i < 5; ++i) causes.push_back(2);
    for (int i = 0; i < 10; ++i) causes.push_back(3);
    const CensoredSample s = synthetic_sum_sample(15.0, causes);
    const double A = alpha_functionals(s, 1.0).value;
    const CauseCounts c = count_causes(s);
    const LambdaMle r = conditional_lambda_mle(1.0, c, s);
    CHECK(r.lambda[0] == doctest::Approx((5.0 / 20.0) * 30.0 / A).epsilon(1e-12));
    CHECK(r.lambda[0] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(r.lambda[1] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.lambda[2] == doctest::Approx(0.5).epsilon(1e-5));
  }

  SUBCASE("rates always sum to m/A") {
    RngStream seeds(8);
    for (int t = 0; t < 20; ++t) {
      const CensoredSample s = simulated_sample(seeds.next_u64());
      const CauseCounts c = count_causes(s);
      for (double a : {0.7, 1.0, 1.9}) {
        const LambdaMle r = conditional_lambda_mle(a, c, s);
        const double sum = r.lambda[0] + r.lambda[1] + r.lambda[2];
        CHECK(sum == doctest::Approx(s.m() / alpha_functionals(s, a).value)
                         .epsilon(1e-12));
      }
    }
  }

  SUBCASE("all causes masked is non-identifiable") {
    std::vector<int> causes(10, 3);
    const CensoredSample s = synthetic_sum_sample(10.0, causes);
    CHECK_THROWS_AS(conditional_lambda_mle(1.0, count_causes(s), s),
                    std::runtime_error);
  }

  SUBCASE("zero count pins the rate at the boundary") {
    std::vector<int> causes(12);
    for (int i = 0; i < 12; ++i) causes[i] = 1 + (i % 2);  // no cause 0
    const CensoredSample s = synthetic_sum_sample(12.0, causes);
    const LambdaMle r = conditional_lambda_mle(1.0, count_causes(s), s);
    CHECK(r.lambda[0] == 0.0);
    CHECK(r.boundary);
  }
}

TEST_CASE("profile fixed point") {
  SUBCASE("score vanishes at the fixed point") {
    RngStream seeds(15);
    for (int t = 0; t < 10; ++t) {
      const CensoredSample s = simulated_sample(seeds.next_u64());
      const AlphaSolveResult r = solve_alpha_fixed_point(s);
      CHECK(r.converged);
      CHECK(std::fabs(profile_score(s, r.alpha)) < 1e-6);
    }
  }

  SUBCASE("bundled dataset 1 shape estimate") {
    const AlphaSolveResult r = solve_alpha_fixed_point(example_censored_dataset(1));
    CHECK(r.alpha == doctest::Approx(1.3846).epsilon(1e-3));
    CHECK(r.converged);
  }

  SUBCASE("agrees with a golden-section profile maximizer") {
    RngStream seeds(900);
    for (int t = 0; t < 50; ++t) {
      const CensoredSample s = simulated_sample(seeds.next_u64());
      const CauseCounts c = count_causes(s);
      if (c.m012() == 0) continue;
      const AlphaSolveResult r = solve_alpha_fixed_point(s);
      auto profile = [&](double a) {
        const LambdaMle lm = conditional_lambda_mle(a, c, s);
        const MobwParams p{a, lm.lambda[0], lm.lambda[1], lm.lambda[2]};
        return log_likelihood(p, s);
      };
      const double gold = oracle::golden_max(profile, 0.05, 20.0, 1e-12);
      CHECK(r.alpha == doctest::Approx(gold).epsilon(1e-4));
    }
  }

  CHECK_THROWS_AS(solve_alpha_fixed_point(simulated_sample(1), -1.0),
                  std::invalid_argument);
}

TEST_CASE("observed Fisher information") {
  SUBCASE("symmetry and diagonal lambda block when nothing is masked") {
    const CensoredSample s = simulated_sample(21, 50, 30, 0.5, 0.0);
    const MobwParams p{1.2, 0.4, 0.9, 1.6};
    const Mat4 I = observed_fisher(p, s);
    CHECK(I.is_symmetric());
    CHECK(I(0, 1) == 0.0);
    CHECK(I(0, 2) == 0.0);
    CHECK(I(1, 2) == 0.0);
  }

  SUBCASE("matches the finite-difference Hessian") {
    RngStream seeds(31);
    for (int t = 0; t < 5; ++t) {
      const CensoredSample s = simulated_sample(seeds.next_u64(), 50, 30, 0.5, 0.2);
      const MobwParams p{0.8 + seeds.uniform(), 0.2 + seeds.uniform(),
                         0.5 + seeds.uniform(), 0.5 + seeds.uniform()};
      const Mat4 I = observed_fisher(p, s);
      const Mat4 H = oracle::fd_negated_hessian(p, s);
      // near-zero entries are compared against the matrix scale: the FD
      // noise floor makes a pure elementwise ratio meaningless there
      const double floor_scale = 1e-3 * I.max_abs();
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const double denom = std::max(std::fabs(I(i, j)), floor_scale);
          CHECK(std::fabs(I(i, j) - H(i, j)) / denom < 1e-4);
        }
      }
    }
  }

  SUBCASE("boundary rate is a domain error") {
    const CensoredSample s = simulated_sample(3);
    CHECK_THROWS_AS(observed_fisher(MobwParams{1.0, 0.0, 1.0, 1.0}, s),
                    std::invalid_argument);
  }
}

TEST_CASE("full fit on the bundled datasets") {
  const FitConfig cfg;  // gamma = 0.05

  SUBCASE("dataset 1") {
    const FitResult r = fit_mle(example_censored_dataset(1), cfg);
    CHECK(r.estimates.lambda0 == doctest::Approx(1.4739).epsilon(1e-3));
    CHECK(r.estimates.lambda1 == doctest::Approx(0.5360).epsilon(1e-3));
    CHECK(r.estimates.lambda2 == doctest::Approx(2.0098).epsilon(1e-3));
    CHECK(r.estimates.alpha == doctest::Approx(1.3846).epsilon(1e-3));
    CHECK(r.acis[3].lower == doctest::Approx(0.9609).epsilon(2e-3));
    CHECK(r.acis[3].upper == doctest::Approx(1.8082).epsilon(2e-3));
    CHECK(r.acis[3].upper - r.acis[3].lower ==
          doctest::Approx(0.8473).epsilon(2e-3));
    CHECK(r.converged);
    CHECK_FALSE(r.boundary);
  }

  SUBCASE("dataset 2") {
    const FitResult r = fit_mle(example_censored_dataset(2), cfg);
    CHECK(r.estimates.lambda0 == doctest::Approx(1.5688).epsilon(1e-3));
    CHECK(r.estimates.lambda1 == doctest::Approx(0.6275).epsilon(1e-3));
    CHECK(r.estimates.lambda2 == doctest::Approx(2.5101).epsilon(1e-3));
    CHECK(r.estimates.alpha == doctest::Approx(1.4685).epsilon(1e-3));
  }

  SUBCASE("covariance inverts the Fisher matrix") {
    const FitResult r = fit_mle(example_censored_dataset(1), cfg);
    const Mat4 prod = r.covariance * r.fisher;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CHECK(std::fabs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-8);
      }
    }
  }

  SUBCASE("interval width identity") {
    const FitResult r = fit_mle(example_censored_dataset(3), cfg);
    const double z = normal_quantile(1.0 - cfg.gamma / 2.0);
    for (int i = 0; i < 4; ++i) {
      REQUIRE(r.acis[i].valid);
      CHECK(r.acis[i].lower < r.acis[i].upper);
      CHECK(r.acis[i].upper - r.acis[i].lower ==
            doctest::Approx(2.0 * z * std::sqrt(r.covariance(i, i)))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("fit with a boundary count suppresses that interval") {
  // build a sample with no simultaneous failures
  std::vector<int> causes(20);
  for (int i = 0; i < 20; ++i) causes[i] = 1 + (i % 2);
  std::vector<double> times(20);
  for (int i = 0; i < 20; ++i) times[i] = 0.05 * (i + 1);
  const CensoredSample s =
      make_censored_sample(20, kInf, times, causes, std::vector<int>(20, 0));
  const FitResult r = fit_mle(s);
  CHECK(r.boundary);
  CHECK(r.estimates.lambda0 == 0.0);
  CHECK_FALSE(r.acis[0].valid);
  CHECK(r.acis[1].valid);
  CHECK(r.acis[3].valid);
  CHECK(std::isnan(r.covariance(0, 0)));
  CHECK(r.covariance(1, 1) > 0.0);
}

TEST_CASE("conditional maximality of the closed-form rates") {
  RngStream seeds(55);
  for (int t = 0; t < 10; ++t) {
    const CensoredSample s = simulated_sample(seeds.next_u64());
    const CauseCounts c = count_causes(s);
    if (c.m0 == 0 || c.m1 == 0 || c.m2 == 0) continue;
    const double alpha = 0.5 + seeds.uniform();
    const LambdaMle lm = conditional_lambda_mle(alpha, c, s);
    const MobwParams at_hat{alpha, lm.lambda[0], lm.lambda[1], lm.lambda[2]};
    const double ll_hat = log_likelihood(at_hat, s);
    for (int k = 0; k < 1000; ++k) {
      const MobwParams perturbed{
          alpha, lm.lambda[0] * std::exp(0.5 * (seeds.uniform() - 0.5)),
          lm.lambda[1] * std::exp(0.5 * (seeds.uniform() - 0.5)),
          lm.lambda[2] * std::exp(0.5 * (seeds.uniform() - 0.5))};
      CHECK(log_likelihood(perturbed, s) <= ll_hat);
    }
  }
}

TEST_CASE("profile consistency over a coarse grid") {
  const CensoredSample s = example_censored_dataset(2);
  const FitResult r = fit_mle(s);
  const double ll_hat = log_likelihood(r.estimates, s);
  const int g = 20;
  for (int i0 = 0; i0 < g; ++i0) {
    for (int i1 = 0; i1 < g; ++i1) {
      for (int i2 = 0; i2 < g; ++i2) {
        for (int i3 = 0; i3 < g; ++i3) {
          const MobwParams p{
              r.estimates.alpha * (0.6 + 0.8 * i3 / (g - 1.0)),
              r.estimates.lambda0 * (0.6 + 0.8 * i0 / (g - 1.0)),
              r.estimates.lambda1 * (0.6 + 0.8 * i1 / (g - 1.0)),
              r.estimates.lambda2 * (0.6 + 0.8 * i2 / (g - 1.0))};
          CHECK(log_likelihood(p, s) <= ll_hat + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("local maximality at the bundled dataset 1 estimate") {
  const CensoredSample s = example_censored_dataset(1);
  const FitResult r = fit_mle(s);
  const double ll_hat = log_likelihood(r.estimates, s);
  RngStream rng(66);
  for (int k = 0; k < 100; ++k) {
    const MobwParams p{r.estimates.alpha * (1.0 + 0.1 * (rng.uniform() - 0.5)),
                       r.estimates.lambda0 * (1.0 + 0.1 * (rng.uniform() - 0.5)),
                       r.estimates.lambda1 * (1.0 + 0.1 * (rng.uniform() - 0.5)),
                       r.estimates.lambda2 * (1.0 + 0.1 * (rng.uniform() - 0.5))};
    CHECK(log_likelihood(p, s) < ll_hat);
  }
}
