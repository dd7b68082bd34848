#include "mobw/censoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mobw {

void CensoringPlan::validate() const {
  if (m < 1 || n < 1 || m > n) {
    throw std::invalid_argument("CensoringPlan: need 1 <= m <= n");
  }
  if (static_cast<int>(removals.size()) != m) {
    throw std::invalid_argument("CensoringPlan: removals must have length m");
  }
  long sum = 0;
  for (int r : removals) {
    if (r < 0) {
      throw std::invalid_argument("CensoringPlan: negative removal count");
    }
    sum += r;
  }
  if (sum != n - m) {
    throw std::invalid_argument(
        "CensoringPlan: removals must sum to n - m (got " +
        std::to_string(sum) + ", expected " + std::to_string(n - m) + ")");
  }
  if (!(T > 0.0)) {
    throw std::invalid_argument("CensoringPlan: T must be > 0");
  }
}

void CensoredSample::validate() const {
  const int mm = m();
  if (mm == 0) throw std::invalid_argument("CensoredSample: empty");
  if (static_cast<int>(causes.size()) != mm ||
      static_cast<int>(applied_removals.size()) != mm) {
    throw std::invalid_argument("CensoredSample: field length mismatch");
  }
  long removed = 0;
  for (int i = 0; i < mm; ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i])) {
      throw std::invalid_argument("CensoredSample: times must be finite > 0");
    }
    if (i > 0 && times[i] < times[i - 1]) {
      throw std::invalid_argument("CensoredSample: times not ascending");
    }
    if (causes[i] < 0 || causes[i] > 3) {
      throw std::invalid_argument("CensoredSample: cause out of {0,1,2,3}");
    }
    if (applied_removals[i] < 0) {
      throw std::invalid_argument("CensoredSample: negative removal");
    }
    removed += applied_removals[i];
  }
  if (rstar < 0 || mm + removed + rstar != n) {
    throw std::invalid_argument(
        "CensoredSample: m + removals + rstar must equal n");
  }
}

CensoredSample generate_at2phcs(const MobwParams& p, const CensoringPlan& plan,
                                RngStream& rng) {
  p.validate();
  plan.validate();

  const double l012 = p.lambda012();
  const double p0 = p.lambda0 / l012;
  const double p1 = p.lambda1 / l012;

  CensoredSample s;
  s.n = plan.n;
  s.T = plan.T;
  s.times.reserve(plan.m);
  s.causes.reserve(plan.m);
  s.applied_removals.reserve(plan.m);

  int pool = plan.n;        // units still on test
  double t_alpha = 0.0;     // current failure time raised to alpha
  for (int i = 0; i < plan.m; ++i) {
    // Next order statistic: minimum of `pool` lifetimes left-truncated at the
    // previous failure; conditional survival exp(-pool*l012*(t^a - prev^a)).
    const double u = rng.uniform();
    t_alpha += -std::log(u) / (pool * l012);
    const double t = std::pow(t_alpha, 1.0 / p.alpha);

    // Cause of the failing unit, conditional law of the latent argmin.
    const double c = rng.uniform();
    const int cause = c < p0 ? 0 : (c < p0 + p1 ? 1 : 2);

    const int applied = t < plan.T ? plan.removals[i] : 0;
    s.times.push_back(t);
    s.causes.push_back(cause);
    s.applied_removals.push_back(applied);
    pool -= 1 + applied;
  }
  s.rstar = pool;
  s.J = static_cast<int>(
      std::count_if(s.times.begin(), s.times.end(),
                    [&](double t) { return t < plan.T; }));
  s.validate();
  return s;
}

CensoredSample mask_causes(const CensoredSample& s, double q, RngStream& rng) {
  if (!(q >= 0.0) || !(q <= 1.0)) {
    throw std::invalid_argument("mask_causes: q must be in [0,1]");
  }
  CensoredSample out = s;
  for (int& d : out.causes) {
    if (rng.uniform() < q) d = 3;
  }
  return out;
}

CauseCounts count_causes(const CensoredSample& s) {
  CauseCounts c;
  for (int d : s.causes) {
    switch (d) {
      case 0: ++c.m0; break;
      case 1: ++c.m1; break;
      case 2: ++c.m2; break;
      default: ++c.m3; break;
    }
  }
  return c;
}

CensoredSample make_censored_sample(int n, double T, std::vector<double> times,
                                    std::vector<int> causes,
                                    std::vector<int> applied) {
  const int mm = static_cast<int>(times.size());
  if (mm == 0) throw std::invalid_argument("make_censored_sample: empty");
  if (causes.size() != times.size() || applied.size() != times.size()) {
    throw std::invalid_argument("make_censored_sample: length mismatch");
  }

  // Stable sort by time, keeping (cause, removal) attached; flag ties.
  std::vector<int> idx(times.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return times[a] < times[b]; });

  CensoredSample s;
  s.n = n;
  s.T = T;
  s.times.reserve(mm);
  s.causes.reserve(mm);
  s.applied_removals.reserve(mm);
  for (int i : idx) {
    s.times.push_back(times[i]);
    s.causes.push_back(causes[i]);
    s.applied_removals.push_back(applied[i]);
  }
  for (int i = 1; i < mm; ++i) {
    if (s.times[i] == s.times[i - 1]) {
      s.had_tied_times = true;
      break;
    }
  }

  long removed = 0;
  for (int i = 0; i < mm; ++i) removed += s.applied_removals[i];
  s.rstar = n - mm - static_cast<int>(removed);
  s.J = static_cast<int>(std::count_if(
      s.times.begin(), s.times.end(), [&](double t) { return t < T; }));
  s.validate();
  return s;
}

}  // namespace mobw
