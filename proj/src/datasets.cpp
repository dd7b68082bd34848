#include "mobw/datasets.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mobw {

namespace {

// (y1, y2) pairs already divided by 90.
constexpr double kSoccer[][2] = {
    {0.0222, 0.0222}, {0.4556, 0.0333}, {0.4667, 0.0333}, {0.6000, 0.0778},
    {0.0889, 0.0889}, {0.2778, 0.1000}, {0.6111, 0.1222}, {0.4889, 0.1444},
    {0.2444, 0.1556}, {0.2778, 0.1556}, {0.7111, 0.1667}, {0.1778, 0.1778},
    {0.1778, 0.8333}, {0.7000, 0.2000}, {0.2000, 0.2000}, {0.2111, 0.2111},
    {0.2889, 0.2222}, {0.2667, 0.2667}, {0.2889, 0.5333}, {0.3000, 0.5222},
    {0.3111, 0.3111}, {0.5667, 0.3111}, {0.4889, 0.3333}, {0.3778, 0.3778},
    {0.4000, 0.5778}, {0.4333, 0.4333}, {0.5889, 0.4333}, {0.4444, 0.4444},
    {0.4667, 0.4667}, {0.9111, 0.5333}, {0.5444, 0.5444}, {0.5444, 0.5444},
    {0.7333, 0.6889}, {0.8444, 0.7111}, {0.7333, 0.9444}, {0.7667, 0.7889},
    {0.8000, 0.8000}};

constexpr int kN = 37;
constexpr int kM = 30;
constexpr double kT = 0.4;

// Indices (into the ascending competing-risks sequence) of the units removed
// mid-test in datasets 2 and 3.
constexpr int kRemoved2[] = {4, 8, 12, 23, 24, 30, 36};
constexpr int kRemoved3[] = {0, 4, 8, 12, 23, 24, 30};

}  // namespace

BivariateDataset soccer_dataset() {
  BivariateDataset d;
  d.normalizer = 90.0;
  for (const auto& p : kSoccer) d.pairs.emplace_back(p[0], p[1]);
  return d;
}

CensoredSample example_censored_dataset(int which) {
  std::vector<CompetingRisksObs> cr = to_competing_risks(soccer_dataset());
  std::stable_sort(cr.begin(), cr.end(),
                   [](const CompetingRisksObs& a, const CompetingRisksObs& b) {
                     return a.y < b.y;
                   });

  std::set<int> removed;
  switch (which) {
    case 1:
      break;  // observed = the m smallest, survivors leave at termination
    case 2:
      removed.insert(std::begin(kRemoved2), std::end(kRemoved2));
      break;
    case 3:
      removed.insert(std::begin(kRemoved3), std::end(kRemoved3));
      break;
    default:
      throw std::invalid_argument("example_censored_dataset: which must be 1..3");
  }

  std::vector<double> times;
  std::vector<int> causes;
  for (int i = 0; i < kN; ++i) {
    if (removed.count(i)) continue;
    if (static_cast<int>(times.size()) == kM) break;
    times.push_back(cr[i].y);
    causes.push_back(cr[i].cause);
  }

  std::vector<int> applied(kM, 0);
  if (which == 2) {
    applied[0] = kN - kM;
  } else if (which == 3) {
    for (int i = 0; i < kN - kM; ++i) applied[i] = 1;
  }
  return make_censored_sample(kN, kT, std::move(times), std::move(causes),
                              std::move(applied));
}

}  // namespace mobw
