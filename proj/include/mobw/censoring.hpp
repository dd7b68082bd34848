#pragma once

#include <cstdint>
#include <vector>

#include "mobw/params.hpp"
#include "mobw/rng.hpp"

namespace mobw {

// Experiment design: n units on test, m observed failures, progressive
// removal plan R_1..R_m and the threshold time T after which intermediate
// removals are suspended. T may be +infinity (plain progressive type-II).
struct CensoringPlan {
  int n = 0;
  int m = 0;
  std::vector<int> removals;
  double T = 0.0;

  void validate() const;  // throws std::invalid_argument on an impossible plan
};

// One realized experiment. times are strictly ascending by construction;
// datasets read from disk may contain ties, which are kept in stable order
// and flagged. J is the number of failures observed strictly before T,
// rstar the terminal removal count. applied_removals[i] is the removal
// actually performed at the i-th failure (0 beyond J).
struct CensoredSample {
  int n = 0;
  double T = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<int> causes;  // each in {0,1,2,3}; 3 = cause not identified
  std::vector<int> applied_removals;
  int J = 0;
  int rstar = 0;
  bool had_tied_times = false;

  int m() const { return static_cast<int>(times.size()); }
  void validate() const;
};

// Failure counts by cause label; m012 is the number with identified cause.
struct CauseCounts {
  int m0 = 0;
  int m1 = 0;
  int m2 = 0;
  int m3 = 0;

  int m012() const { return m0 + m1 + m2; }
  int total() const { return m0 + m1 + m2 + m3; }
};

// Generate an adaptive progressively censored competing-risks sample.
// Sequential construction: each failure time is drawn from the left-truncated
// minimum distribution given the current risk-pool size (inverse CDF of the
// conditional Weibull(alpha, lambda012) survival), its cause from the latent
// argmin law; the planned removal is applied only while the failure time is
// below T, and whatever remains after the m-th failure leaves as rstar.
CensoredSample generate_at2phcs(const MobwParams& p, const CensoringPlan& plan,
                                RngStream& rng);

// Independently replace each cause label by 3 with probability q.
CensoredSample mask_causes(const CensoredSample& s, double q, RngStream& rng);

CauseCounts count_causes(const CensoredSample& s);

// Build a censored sample from already-observed (time, cause) data under a
// plan, used when ingesting real datasets: removals are taken as recorded in
// `applied`, the adaptive bookkeeping (J, rstar) is recomputed from T.
CensoredSample make_censored_sample(int n, double T, std::vector<double> times,
                                    std::vector<int> causes,
                                    std::vector<int> applied);

}  // namespace mobw
