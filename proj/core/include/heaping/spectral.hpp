#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "heaping/shape.hpp"

namespace heaping {

struct AmplitudeSpectrum {
  std::vector<double> frequencies;  // cycles per percent, 0 ... Nyquist
  std::vector<double> amplitudes;
  double normalization = 1.0;  // number of samples transformed

  /// Amplitude at the grid frequency nearest to `frequency`.
  double at(double frequency) const;
};

/// |DFT| / N of mean-removed samples, with the DC bin reporting |mean|.
/// `spacing` is the sample spacing in percent.
AmplitudeSpectrum amplitude_spectrum(std::span<const double> samples, double spacing);

/// Spectrum of a full-range histogram: the 0 ... 99.9 bins (the 100% bin is
/// dropped so that 0.1% bins give exactly 1000 samples and a 0 ... 5 per
/// percent frequency grid). Requires the uniform 0.1% grid.
AmplitudeSpectrum amplitude_spectrum(const WeightedHistogram& histogram);

/// Sliding-window spectra of the 0 ... 100% range: 15%-wide Hamming
/// windows, hop of one bin, centres 7.5% ... 92.5%.
struct Spectrogram {
  std::vector<double> centers;
  std::vector<double> frequencies;
  std::vector<double> values;  // row-major [center][frequency]; NaN = undefined

  double at(std::size_t center, std::size_t frequency) const {
    return values[center * frequencies.size() + frequency];
  }
  bool defined(std::size_t center, std::size_t frequency) const {
    return !std::isnan(at(center, frequency));
  }
  std::size_t frequency_index(double frequency) const;
};

inline constexpr double kSpectrogramWindowPercent = 15.0;

/// Un-normalised windowed amplitudes |DFT(w * (x - mean))| / N, DC bin
/// |sum(w * x)| / N.
Spectrogram raw_spectrogram(const WeightedHistogram& histogram);

/// Cell-wise ratio raw / reference; cells with a zero reference are NaN.
Spectrogram normalize_spectrogram(const Spectrogram& raw, const Spectrogram& reference);

/// Cell-wise average of raw spectrograms of every ensemble iteration.
Spectrogram mean_raw_spectrogram(const HistogramEnsemble& ensemble, unsigned workers = 0);
Spectrogram mean_raw_spectrogram(std::span<const WeightedHistogram> histograms);

/// Raw spectrogram of `histogram` divided by the average Monte Carlo one.
Spectrogram spectrogram(const WeightedHistogram& histogram,
                        std::span<const WeightedHistogram> mc_histograms);
Spectrogram spectrogram(const WeightedHistogram& histogram, const HistogramEnsemble& mc,
                        unsigned workers = 0);

/// Values of one frequency row across window centres (NaN where undefined).
std::vector<double> harmonic_track(const Spectrogram& spectrogram, double frequency = 1.0);
/// The track's value in the last (85 ... 100%) window.
double last_window_harmonic(const Spectrogram& spectrogram, double frequency = 1.0);

}  // namespace heaping
