#include <gtest/gtest.h>

#include <cmath>

#include "heaping/distributions.hpp"
#include "oracles.hpp"

namespace heaping {
namespace {

std::vector<std::uint64_t> tally(const BinomialSampler& s, Count n, std::uint64_t draws, std::uint64_t seed) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  RandomStream stream(seed, StreamTag::turnout, 0, 0);
  for (std::uint64_t i = 0; i < draws; ++i) {
    const Count k = s(stream);
    EXPECT_GE(k, 0);
    EXPECT_LE(k, n);
    ++counts[static_cast<std::size_t>(k)];
  }
  return counts;
}

TEST(LogFactorial, MatchesLgamma) {
  for (Count k : {0, 1, 2, 10, 100, 255, 256, 257, 1000, 123456}) {
    EXPECT_NEAR(log_factorial(k), std::lgamma(static_cast<double>(k) + 1.0), 1e-9 * std::max(1.0, std::lgamma(k + 1.0)))
        << k;
  }
}

class BinomialPmf : public ::testing::TestWithParam<std::pair<int, double>> {};

TEST_P(BinomialPmf, InversionAndRejectionMatchExactPmf) {
  const auto [n, p] = GetParam();
  const std::uint64_t draws = 400000;
  const auto counts = tally(BinomialSampler(n, p), n, draws, 11);
  EXPECT_LT(oracle::max_standard_error_ratio(oracle::binomial_pmf(n, p), counts, draws), 4.5);
}

// Small n*p goes through inversion, the larger ones through rejection, and
// p > 0.5 through the mirrored branch.
INSTANTIATE_TEST_SUITE_P(Cases, BinomialPmf,
                         ::testing::Values(std::pair{20, 0.3}, std::pair{20, 0.85}, std::pair{60, 0.5},
                                           std::pair{50, 0.95}, std::pair{40, 0.02}));

TEST(Binomial, LargeTrialsMoments) {
  const BinomialSampler s(100000, 0.37);
  RandomStream stream(5, StreamTag::turnout, 1, 1);
  const int draws = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < draws; ++i) {
    const double x = static_cast<double>(s(stream));
    sum += x;
    sq += x * x;
  }
  const double mean = sum / draws, var = sq / draws - mean * mean;
  EXPECT_NEAR(mean, 37000.0, 5 * std::sqrt(100000 * 0.37 * 0.63 / draws));
  EXPECT_NEAR(var / (100000 * 0.37 * 0.63), 1.0, 0.02);
}

TEST(Binomial, DegenerateProbabilities) {
  RandomStream stream(1, StreamTag::turnout, 0, 0);
  EXPECT_EQ(BinomialSampler(500, 0.0)(stream), 0);
  EXPECT_EQ(BinomialSampler(500, 1.0)(stream), 500);
  EXPECT_EQ(BinomialSampler(0, 0.4)(stream), 0);
}

TEST(Gamma, Moments) {
  RandomStream stream(3, StreamTag::turnout, 0, 0);
  for (double shape : {0.5, 1.0, 4.5}) {
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = gamma_variate(stream, shape);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, shape, 0.02 * shape + 0.01) << shape;
    EXPECT_NEAR(sq / n - mean * mean, shape, 0.05 * shape + 0.01) << shape;
  }
}

TEST(Beta, Mean) {
  RandomStream stream(4, StreamTag::turnout, 0, 0);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += beta_variate(stream, 6.0, 3.0);
  EXPECT_NEAR(sum / n, 6.0 / 9.0, 0.002);
}

}  // namespace
}  // namespace heaping
