#include "heaping/distributions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "heaping/errors.hpp"

namespace heaping {

namespace {

constexpr Count kLogFactorialTableSize = 256;

const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    for (Count k = 0; k < kLogFactorialTableSize; ++k) {
      t[k] = std::lgamma(static_cast<double>(k) + 1.0);
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(Count k) {
  if (k < 0) throw DomainError("log_factorial of a negative count");
  if (k < kLogFactorialTableSize) return log_factorial_table()[static_cast<std::size_t>(k)];
  // Stirling series; the first omitted term is below 1e-19 for k >= 256.
  const double x = static_cast<double>(k);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x) +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

double standard_normal(RandomStream& stream) {
  const double u1 = stream.uniform();
  const double u2 = stream.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double gamma_variate(RandomStream& stream, double shape) {
  if (!(shape > 0.0)) throw DomainError("gamma shape must be positive");
  if (shape < 1.0) {
    const double boosted = gamma_variate(stream, shape + 1.0);
    return boosted * std::pow(stream.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(stream);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_variate(RandomStream& stream, double a, double b) {
  const double x = gamma_variate(stream, a);
  const double y = gamma_variate(stream, b);
  return x / (x + y);
}

BinomialSampler::BinomialSampler(Count trials, double probability) : trials_(trials) {
  if (trials < 0) throw DomainError("binomial trial count must be non-negative");
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw DomainError("binomial probability outside [0, 1]");
  }
  flipped_ = probability > 0.5;
  p_ = flipped_ ? 1.0 - probability : probability;
  const double n = static_cast<double>(trials);
  if (trials == 0 || p_ == 0.0) {
    method_ = Method::constant;
    return;
  }
  const double q = 1.0 - p_;
  if (n * p_ < 10.0) {
    method_ = Method::inversion;
    q_pow_n_ = std::exp(n * std::log1p(-p_));
    odds_ = p_ / q;
    const double mean = n * p_;
    bound_ = std::min(n, mean + 10.0 * std::sqrt(mean * q + 1.0));
    return;
  }
  method_ = Method::rejection;
  const double spq = std::sqrt(n * p_ * q);
  b_ = 1.15 + 2.53 * spq;
  a_ = -0.0873 + 0.0248 * b_ + 0.01 * p_;
  c_ = n * p_ + 0.5;
  vr_ = 0.92 - 4.2 / b_;
  alpha_ = (2.83 + 5.1 / b_) * spq;
  log_odds_ = std::log(p_ / q);
  mode_ = static_cast<Count>(std::floor((n + 1.0) * p_));
  h_ = log_factorial(mode_) + log_factorial(trials - mode_);
}

Count BinomialSampler::draw_inversion(RandomStream& stream) const {
  const double n = static_cast<double>(trials_);
  for (;;) {
    double u = stream.uniform();
    double prob = q_pow_n_;
    Count x = 0;
    bool overflow = false;
    while (u > prob) {
      u -= prob;
      ++x;
      if (static_cast<double>(x) > bound_) {
        overflow = true;
        break;
      }
      prob *= odds_ * (n - static_cast<double>(x) + 1.0) / static_cast<double>(x);
    }
    if (!overflow) return x;
  }
}

Count BinomialSampler::draw_rejection(RandomStream& stream) const {
  for (;;) {
    const double u = stream.uniform() - 0.5;
    double v = stream.uniform();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a_ / us + b_) * u + c_);
    if (kf < 0.0 || kf > static_cast<double>(trials_)) continue;
    const Count k = static_cast<Count>(kf);
    if (us >= 0.07 && v <= vr_) return k;
    v = std::log(v * alpha_ / (a_ / (us * us) + b_));
    const double bound = h_ - log_factorial(k) - log_factorial(trials_ - k) +
                         static_cast<double>(k - mode_) * log_odds_;
    if (v <= bound) return k;
  }
}

Count BinomialSampler::operator()(RandomStream& stream) const {
  Count k = 0;
  switch (method_) {
    case Method::constant: k = 0; break;
    case Method::inversion: k = draw_inversion(stream); break;
    case Method::rejection: k = draw_rejection(stream); break;
  }
  return flipped_ ? trials_ - k : k;
}

Count binomial_variate(RandomStream& stream, Count trials, double probability) {
  return BinomialSampler(trials, probability)(stream);
}

}  // namespace heaping
