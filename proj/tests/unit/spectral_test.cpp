#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heaping/errors.hpp"
#include "heaping/fft.hpp"
#include "heaping/spectral.hpp"
#include "oracles.hpp"

namespace heaping {
namespace {

class DftLength : public ::testing::TestWithParam<int> {};

TEST_P(DftLength, MatchesDefinition) {
  const int n = GetParam();
  std::mt19937_64 gen(static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::complex<double>> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = {u(gen), u(gen)};
  const auto fast = dft(std::span<const std::complex<double>>(x));
  const auto slow = oracle::naive_dft(x);
  ASSERT_EQ(fast.size(), slow.size());
  for (std::size_t k = 0; k < fast.size(); ++k) {
    EXPECT_NEAR(fast[k].real(), slow[k].real(), 1e-9) << "k=" << k;
    EXPECT_NEAR(fast[k].imag(), slow[k].imag(), 1e-9) << "k=" << k;
  }
  std::vector<double> re(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) re[i] = x[i].real();
  const auto fr = dft(std::span<const double>(re));
  const auto sr = oracle::naive_dft(re);
  for (std::size_t k = 0; k < fr.size(); ++k) EXPECT_NEAR(std::abs(fr[k] - sr[k]), 0.0, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Lengths, DftLength,
                         ::testing::Values(1, 2, 3, 4, 5, 7, 8, 12, 13, 17, 30, 64, 97, 100, 127,
                                           128, 150, 210, 211, 243, 251, 256));

WeightedHistogram comb(int every_tenths, int from_percent = 0, int to_percent = 100) {
  WeightedHistogram h;
  h.weights.assign(1001, 0.0);
  for (int b = from_percent * 10; b <= to_percent * 10; b += every_tenths) {
    h.weights[static_cast<std::size_t>(b)] = 1.0;
  }
  return h;
}

TEST(Spectrum, GridAndNormalization) {
  const auto s = amplitude_spectrum(comb(10));
  ASSERT_EQ(s.frequencies.size(), 501u);
  EXPECT_DOUBLE_EQ(s.frequencies.back(), 5.0);
  EXPECT_DOUBLE_EQ(s.normalization, 1000.0);
  EXPECT_NEAR(s.at(0.0), 0.1, 1e-12);  // mean of the 1000 samples
}

TEST(Spectrum, OnePercentCombHasIntegerHarmonics) {
  const auto s = amplitude_spectrum(comb(10));
  EXPECT_NEAR(s.at(1.0), 0.1, 1e-9);
  EXPECT_NEAR(s.at(2.0), 0.1, 1e-9);
  EXPECT_NEAR(s.at(0.5), 0.0, 1e-9);
  EXPECT_NEAR(s.at(0.2), 0.0, 1e-9);
}

TEST(Spectrum, FivePercentCombHasFifthHarmonics) {
  const auto s = amplitude_spectrum(comb(50));
  for (double f : {0.2, 0.4, 0.6, 0.8, 1.0}) EXPECT_NEAR(s.at(f), 0.02, 1e-9) << f;
  EXPECT_NEAR(s.at(0.1), 0.0, 1e-9);
  EXPECT_NEAR(s.at(0.3), 0.0, 1e-9);
}

TEST(Spectrum, RejectsOtherGrids) {
  WeightedHistogram h;
  h.bin_width = Percent::from_ticks(2000);
  h.weights.assign(501, 1.0);
  EXPECT_THROW(amplitude_spectrum(h), ParameterError);
}

TEST(Spectrogram, Geometry) {
  const auto s = raw_spectrogram(comb(10));
  EXPECT_EQ(s.centers.size(), 851u);
  EXPECT_EQ(s.frequencies.size(), 76u);
  EXPECT_DOUBLE_EQ(s.centers.front(), 7.5);
  EXPECT_DOUBLE_EQ(s.centers.back(), 92.5);
  EXPECT_NEAR(s.frequencies[15], 1.0, 1e-12);
  EXPECT_NEAR(s.frequencies.back(), 5.0, 1e-12);
}

TEST(Spectrogram, NormalizedBySelfIsOne) {
  const auto h = comb(10);
  const std::vector<WeightedHistogram> mc = {h};
  const auto s = spectrogram(h, mc);
  std::size_t defined = 0;
  for (std::size_t c = 0; c < s.centers.size(); ++c) {
    for (std::size_t f = 0; f < s.frequencies.size(); ++f) {
      if (s.defined(c, f)) {
        ++defined;
        ASSERT_DOUBLE_EQ(s.at(c, f), 1.0);
      }
    }
  }
  EXPECT_GT(defined, 0u);
}

TEST(Spectrogram, ZeroReferenceIsUndefined) {
  const auto raw = raw_spectrogram(comb(10, 70, 100));
  WeightedHistogram flat;
  flat.weights.assign(1001, 0.0);
  const auto ref = raw_spectrogram(flat);
  const auto n = normalize_spectrogram(raw, ref);
  EXPECT_FALSE(n.defined(0, 15));
}

TEST(Spectrogram, CombFromSeventyRisesNearSeventy) {
  const auto track = harmonic_track(raw_spectrogram(comb(10, 70, 100)), 1.0);
  const auto s = raw_spectrogram(comb(10, 70, 100));
  double peak = 0.0;
  for (double v : track) peak = std::max(peak, v);
  ASSERT_GT(peak, 0.0);
  std::size_t first = 0;
  while (track[first] < 0.5 * peak) ++first;
  EXPECT_NEAR(s.centers[first], 70.0, 5.0);
  for (std::size_t c = 0; s.centers[c] < 62.5; ++c) EXPECT_NEAR(track[c], 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(last_window_harmonic(s, 1.0), track.back());
}

}  // namespace
}  // namespace heaping
