#include "mobw/mobw_dist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mobw/weibull.hpp"

namespace mobw {

double mobw_joint_sf(double y1, double y2, const MobwParams& p) {
  p.validate();
  if (!(y1 >= 0.0) || !(y2 >= 0.0)) {
    throw std::invalid_argument("mobw_joint_sf: times must be >= 0");
  }
  if (y1 < y2) {
    return std::exp(-p.lambda1 * std::pow(y1, p.alpha) -
                    p.lambda02() * std::pow(y2, p.alpha));
  }
  if (y2 < y1) {
    return std::exp(-p.lambda01() * std::pow(y1, p.alpha) -
                    p.lambda2 * std::pow(y2, p.alpha));
  }
  return std::exp(-p.lambda012() * std::pow(y1, p.alpha));
}

double mobw_joint_pdf(double y1, double y2, const MobwParams& p) {
  p.validate();
  if (!(y1 > 0.0) || !(y2 > 0.0)) {
    throw std::invalid_argument("mobw_joint_pdf: times must be > 0");
  }
  if (y1 < y2) {
    return weibull_pdf(y1, p.alpha, p.lambda1) *
           weibull_pdf(y2, p.alpha, p.lambda02());
  }
  if (y2 < y1) {
    return weibull_pdf(y1, p.alpha, p.lambda01()) *
           weibull_pdf(y2, p.alpha, p.lambda2);
  }
  return (p.lambda0 / p.lambda012()) * weibull_pdf(y1, p.alpha, p.lambda012());
}

LatentTriple sample_latent_triple(const MobwParams& p, RngStream& rng) {
  p.validate();
  const double u0 = rng.uniform();
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  LatentTriple t;
  t.v0 = p.lambda0 > 0.0
             ? std::pow(-std::log(u0) / p.lambda0, 1.0 / p.alpha)
             : std::numeric_limits<double>::infinity();
  t.v1 = std::pow(-std::log(u1) / p.lambda1, 1.0 / p.alpha);
  t.v2 = std::pow(-std::log(u2) / p.lambda2, 1.0 / p.alpha);
  return t;
}

MinAndCause sample_min_and_cause(const MobwParams& p, RngStream& rng) {
  const LatentTriple t = sample_latent_triple(p, rng);
  MinAndCause r;
  r.y = std::min(t.v0, std::min(t.v1, t.v2));
  if (t.v0 <= r.y) {
    r.cause = 0;  // covers v0 minimal and every tie involving v0
  } else if (t.v1 <= r.y && t.v2 <= r.y) {
    r.cause = 0;  // exact v1 == v2 tie: simultaneous failure
  } else if (t.v1 <= r.y) {
    r.cause = 1;
  } else {
    r.cause = 2;
  }
  return r;
}

std::array<double, 3> cause_probabilities(const MobwParams& p) {
  p.validate();
  const double s = p.lambda012();
  return {p.lambda0 / s, p.lambda1 / s, p.lambda2 / s};
}

std::array<double, 3> cause_probabilities_alt(const MobwParams& p) {
  p.validate();
  const double g =
      p.lambda0 + p.lambda1 * p.lambda02() + p.lambda2 * p.lambda01();
  return {p.lambda0 / g, p.lambda2 * p.lambda01() / g,
          p.lambda1 * p.lambda02() / g};
}

}  // namespace mobw
