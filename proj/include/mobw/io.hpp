#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mobw/bayes.hpp"
#include "mobw/censoring.hpp"
#include "mobw/likelihood.hpp"

namespace mobw {

// Paired lifetimes, optionally rescaled by a horizon constant (recorded so
// the original units can be recovered).
struct BivariateDataset {
  std::vector<std::pair<double, double>> pairs;
  double normalizer = 1.0;
};

struct CompetingRisksObs {
  double y = 0.0;
  int cause = 0;
};

// min/cause reduction: cause 0 on exact equality, 1 when the first component
// fails first, 2 otherwise.
std::vector<CompetingRisksObs> to_competing_risks(const BivariateDataset& d);

// Censored-sample CSV: one `# {...}` header record carrying
// (n, m, T, J, Rstar, seed), then `y,delta,removal` rows. Doubles are printed
// with 17 significant digits so a write/read round trip is bit-exact.
void write_censored_csv(const CensoredSample& s, std::ostream& os);
void write_censored_csv(const CensoredSample& s, const std::string& path);
CensoredSample read_censored_csv(std::istream& is);
CensoredSample read_censored_csv_file(const std::string& path);

// Bivariate CSV: `y1,y2` rows, `#`-comments ignored.
void write_bivariate_csv(const BivariateDataset& d, std::ostream& os);
BivariateDataset read_bivariate_csv(std::istream& is);
BivariateDataset read_bivariate_csv_file(const std::string& path);

// Fit summary as a JSON document (estimates, covariance row-major, intervals,
// iteration diagnostics).
std::string fit_result_to_json(const FitResult& r);

// Posterior draw dump: `iter,alpha,lambda0,lambda1,lambda2`.
void write_draws_csv(const PosteriorDraws& draws, std::ostream& os);

// Plot-ready evaluation of the joint density on a square grid over
// (0, y_max]^2: `y1,y2,density,part` rows where part marks the wedge or the
// diagonal (whose entries are the singular line density, not a surface
// height).
void write_joint_pdf_grid(const MobwParams& p, double y_max, int points,
                          std::ostream& os);

// Flat key = value configuration file; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

std::string format_double(double v);  // shortest round-trippable formatting

}  // namespace mobw
