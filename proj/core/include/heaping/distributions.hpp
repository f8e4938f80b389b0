#pragma once

#include "heaping/model.hpp"
#include "heaping/rng.hpp"

namespace heaping {

/// ln(k!) without touching the global signgam state of lgamma, so it is
/// safe to call from worker threads.
double log_factorial(Count k);

double standard_normal(RandomStream& stream);
/// Marsaglia-Tsang; shape > 0, unit scale.
double gamma_variate(RandomStream& stream, double shape);
/// Ratio of two unit-scale gammas.
double beta_variate(RandomStream& stream, double a, double b);

/// Exact Binom(n, p) sampler with the per-(n, p) setup hoisted out of the
/// draw. Sequential inversion when n*min(p,1-p) < 10, otherwise
/// transformed rejection with squeeze (Hormann's BTRS), both O(1) expected.
class BinomialSampler {
 public:
  BinomialSampler() = default;
  BinomialSampler(Count trials, double probability);

  Count operator()(RandomStream& stream) const;
  Count trials() const { return trials_; }

 private:
  enum class Method : std::uint8_t { constant, inversion, rejection };

  Count draw_inversion(RandomStream& stream) const;
  Count draw_rejection(RandomStream& stream) const;

  Count trials_ = 0;
  double p_ = 0.0;  // min(p, 1-p)
  bool flipped_ = false;
  Method method_ = Method::constant;
  // inversion
  double q_pow_n_ = 1.0;
  double odds_ = 0.0;
  double bound_ = 0.0;
  // rejection
  double a_ = 0.0, b_ = 0.0, c_ = 0.0, vr_ = 0.0, alpha_ = 0.0, log_odds_ = 0.0, h_ = 0.0;
  Count mode_ = 0;
};

/// One-shot draw; builds the sampler internally.
Count binomial_variate(RandomStream& stream, Count trials, double probability);

}  // namespace heaping
