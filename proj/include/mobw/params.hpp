#pragma once

#include <stdexcept>
#include <string>

namespace mobw {

// Model parameters: common Weibull shape alpha and the three rates of the
// latent lifetimes. lambda0 couples the two observable components; lambda0=0
// is the independence boundary and is a legal value.
struct MobwParams {
  double alpha = 1.0;
  double lambda0 = 0.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;

  double lambda012() const { return lambda0 + lambda1 + lambda2; }
  double lambda01() const { return lambda0 + lambda1; }
  double lambda02() const { return lambda0 + lambda2; }

  void validate() const {
    if (!(alpha > 0.0)) {
      throw std::invalid_argument("MobwParams: alpha must be > 0, got " +
                                  std::to_string(alpha));
    }
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
      throw std::invalid_argument("MobwParams: lambda1 and lambda2 must be > 0");
    }
    if (!(lambda0 >= 0.0)) {
      throw std::invalid_argument("MobwParams: lambda0 must be >= 0, got " +
                                  std::to_string(lambda0));
    }
  }
};

// Lifetimes of the three independent latent components.
struct LatentTriple {
  double v0 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

}  // namespace mobw
