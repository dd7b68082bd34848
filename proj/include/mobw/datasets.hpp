#pragma once

#include "mobw/censoring.hpp"
#include "mobw/io.hpp"

namespace mobw {

// UEFA Champions League first-goal times (Meintanis 2007): y1 is the minute
// of the first goal by any team, y2 the minute of the first goal by the home
// team, both divided by the 90-minute horizon. 37 matches.
BivariateDataset soccer_dataset();

// The three worked-example censored subsets derived from the soccer data,
// each with n = 37, m = 30, T = 0.4:
//   1: removals (0*29, 7)  — everything removed at termination
//   2: removals (7, 0*29)  — seven units removed at the first failure
//   3: removals (1*7, 0*23) — one unit removed at each of the first seven
// The removed units for 2 and 3 are fixed historical choices shipped with
// the data, not regenerable from a rule.
CensoredSample example_censored_dataset(int which);

}  // namespace mobw
