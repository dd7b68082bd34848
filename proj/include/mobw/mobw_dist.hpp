#pragma once

#include <array>

#include "mobw/params.hpp"
#include "mobw/rng.hpp"

namespace mobw {

// Joint survival function of the bivariate lifetime pair. Three-branch form:
// the off-diagonal wedges factor into Weibull survival functions, the
// diagonal y1 == y2 (selected by exact comparison) carries the coupled rate.
double mobw_joint_sf(double y1, double y2, const MobwParams& p);

// Joint density: absolutely continuous on each wedge plus a singular line
// density (lambda0/lambda012) * f(y; alpha, lambda012) on the diagonal.
double mobw_joint_pdf(double y1, double y2, const MobwParams& p);

// Inverse-CDF draw of the three latent lifetimes (v0 is +infinity when
// lambda0 == 0). Consumes exactly three uniforms.
LatentTriple sample_latent_triple(const MobwParams& p, RngStream& rng);

struct MinAndCause {
  double y = 0.0;
  int cause = 0;  // 0 simultaneous, 1 first component smaller, 2 second smaller
};

// Minimum lifetime and its failure cause via the latent argmin. Exact
// floating-point ties resolve to cause 0 (simultaneous failure). Marginally
// y ~ Weibull(alpha, lambda012).
MinAndCause sample_min_and_cause(const MobwParams& p, RngStream& rng);

// P(cause = 0,1,2) of the minimum under the latent construction:
// lambda_j / lambda012. This is what sampling and data generation follow.
std::array<double, 3> cause_probabilities(const MobwParams& p);

// An alternative normalization that circulates in the literature:
//   P0 = l0/g, P1 = l2*l01/g, P2 = l1*l02/g, g = l0 + l1*l02 + l2*l01.
// It does NOT agree with the latent-minimum construction (or with the wedge
// masses of the joint density) except in degenerate cases; it is exposed only
// so the two can be compared side by side.
std::array<double, 3> cause_probabilities_alt(const MobwParams& p);

}  // namespace mobw
