#include "heaping/spectral.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>

#include "heaping/errors.hpp"
#include "heaping/fft.hpp"
#include "heaping/parallel.hpp"

namespace heaping {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t nearest_index(const std::vector<double>& grid, double value) {
  if (grid.empty()) throw ParameterError("empty frequency grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::fabs(grid[i] - value) < std::fabs(grid[best] - value)) best = i;
  }
  return best;
}

struct WindowGeometry {
  std::size_t length = 0;  // samples per window
  std::size_t first_center = 0;
  std::size_t last_center = 0;
  double spacing = 0.0;
};

WindowGeometry window_geometry(const WeightedHistogram& h) {
  const std::int64_t w = h.bin_width.ticks();
  const std::int64_t window_ticks =
      static_cast<std::int64_t>(kSpectrogramWindowPercent) * Percent::kTicksPerPercent;
  if (w <= 0 || window_ticks % (2 * w) != 0 || h.size() != bin_count(h.bin_width)) {
    throw ParameterError("spectrogram needs a uniform full-range grid whose bins tile 7.5%");
  }
  WindowGeometry g;
  g.length = static_cast<std::size_t>(window_ticks / w);
  g.first_center = g.length / 2;
  g.last_center = (h.size() - 1) - g.length / 2;
  g.spacing = h.bin_width.to_double();
  return g;
}

std::vector<double> hamming(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
  }
  return w;
}

Spectrogram empty_spectrogram(const WindowGeometry& g) {
  Spectrogram s;
  for (std::size_t c = g.first_center; c <= g.last_center; ++c) {
    s.centers.push_back(static_cast<double>(c) * g.spacing);
  }
  const double window_percent = static_cast<double>(g.length) * g.spacing;
  for (std::size_t k = 0; k <= g.length / 2; ++k) {
    s.frequencies.push_back(static_cast<double>(k) / window_percent);
  }
  s.values.assign(s.centers.size() * s.frequencies.size(), 0.0);
  return s;
}

template <class Sample>
void fill_raw(std::span<const Sample> samples, const WindowGeometry& g,
              const std::vector<double>& window, Spectrogram& out) {
  const std::size_t nf = out.frequencies.size();
  const double n = static_cast<double>(g.length);
  std::vector<double> segment(g.length);
  for (std::size_t ci = 0; ci < out.centers.size(); ++ci) {
    const std::size_t begin = ci;  // window of centre first_center + ci starts at bin ci
    double m = 0.0;
    for (std::size_t j = 0; j < g.length; ++j) m += static_cast<double>(samples[begin + j]);
    m /= n;
    double dc = 0.0;
    for (std::size_t j = 0; j < g.length; ++j) {
      const double x = static_cast<double>(samples[begin + j]);
      dc += window[j] * x;
      segment[j] = window[j] * (x - m);
    }
    const auto spectrum = dft(std::span<const double>(segment));
    double* row = out.values.data() + ci * nf;
    row[0] = std::fabs(dc) / n;
    for (std::size_t k = 1; k < nf; ++k) row[k] = std::abs(spectrum[k]) / n;
  }
}

}  // namespace

double AmplitudeSpectrum::at(double frequency) const {
  return amplitudes[nearest_index(frequencies, frequency)];
}

AmplitudeSpectrum amplitude_spectrum(std::span<const double> samples, double spacing) {
  if (samples.empty() || !(spacing > 0.0)) {
    throw ParameterError("spectrum needs samples on a positive uniform spacing");
  }
  const std::size_t n = samples.size();
  double m = 0.0;
  for (double x : samples) m += x;
  m /= static_cast<double>(n);
  std::vector<double> centred(samples.begin(), samples.end());
  for (double& x : centred) x -= m;
  const auto spectrum = dft(std::span<const double>(centred));

  AmplitudeSpectrum out;
  out.normalization = static_cast<double>(n);
  const double span_percent = static_cast<double>(n) * spacing;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    out.frequencies.push_back(static_cast<double>(k) / span_percent);
    out.amplitudes.push_back(k == 0 ? std::fabs(m) : std::abs(spectrum[k]) / out.normalization);
  }
  return out;
}

AmplitudeSpectrum amplitude_spectrum(const WeightedHistogram& histogram) {
  if (histogram.bin_width != Percent::from_ticks(1000) || histogram.size() != 1001) {
    throw ParameterError("amplitude spectrum needs the uniform 0.1% grid");
  }
  return amplitude_spectrum(std::span<const double>(histogram.weights).first(1000),
                            histogram.bin_width.to_double());
}

std::size_t Spectrogram::frequency_index(double frequency) const {
  return nearest_index(frequencies, frequency);
}

Spectrogram raw_spectrogram(const WeightedHistogram& histogram) {
  const auto g = window_geometry(histogram);
  Spectrogram s = empty_spectrogram(g);
  fill_raw(std::span<const double>(histogram.weights), g, hamming(g.length), s);
  return s;
}

Spectrogram normalize_spectrogram(const Spectrogram& raw, const Spectrogram& reference) {
  if (raw.values.size() != reference.values.size() ||
      raw.frequencies.size() != reference.frequencies.size()) {
    throw ParameterError("spectrograms are on different grids");
  }
  Spectrogram out = raw;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = reference.values[i] == 0.0 ? kNaN : raw.values[i] / reference.values[i];
  }
  return out;
}

Spectrogram mean_raw_spectrogram(const HistogramEnsemble& ensemble, unsigned workers) {
  if (ensemble.iterations() == 0) throw ParameterError("empty Monte Carlo set");
  WeightedHistogram shape_only;
  shape_only.bin_width = ensemble.bin_width();
  shape_only.weights.resize(ensemble.bins());
  const auto g = window_geometry(shape_only);
  const auto window = hamming(g.length);
  const Spectrogram blank = empty_spectrogram(g);

  const std::size_t chunk = std::max<std::size_t>(32, ensemble.iterations() / 64);
  auto sum = ordered_reduce(
      ensemble.iterations(), chunk, workers, blank.values,
      [&](std::size_t it, std::vector<double>& acc) {
        Spectrogram s = blank;
        fill_raw(ensemble.row(it), g, window, s);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s.values[i];
      },
      [](std::vector<double>& total, const std::vector<double>& part) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
      });
  Spectrogram out = blank;
  const double n = static_cast<double>(ensemble.iterations());
  for (std::size_t i = 0; i < sum.size(); ++i) out.values[i] = sum[i] / n;
  return out;
}

Spectrogram mean_raw_spectrogram(std::span<const WeightedHistogram> histograms) {
  if (histograms.empty()) throw ParameterError("empty Monte Carlo set");
  Spectrogram out = raw_spectrogram(histograms.front());
  for (std::size_t h = 1; h < histograms.size(); ++h) {
    const Spectrogram s = raw_spectrogram(histograms[h]);
    if (s.values.size() != out.values.size()) throw ParameterError("histograms are on different grids");
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += s.values[i];
  }
  for (double& v : out.values) v /= static_cast<double>(histograms.size());
  return out;
}

Spectrogram spectrogram(const WeightedHistogram& histogram,
                        std::span<const WeightedHistogram> mc_histograms) {
  return normalize_spectrogram(raw_spectrogram(histogram), mean_raw_spectrogram(mc_histograms));
}

Spectrogram spectrogram(const WeightedHistogram& histogram, const HistogramEnsemble& mc,
                        unsigned workers) {
  if (histogram.bin_width != mc.bin_width()) throw ParameterError("histograms are on different grids");
  return normalize_spectrogram(raw_spectrogram(histogram), mean_raw_spectrogram(mc, workers));
}

std::vector<double> harmonic_track(const Spectrogram& s, double frequency) {
  const std::size_t f = s.frequency_index(frequency);
  std::vector<double> track(s.centers.size());
  for (std::size_t c = 0; c < s.centers.size(); ++c) track[c] = s.at(c, f);
  return track;
}

double last_window_harmonic(const Spectrogram& s, double frequency) {
  if (s.centers.empty()) throw ParameterError("empty spectrogram");
  return s.at(s.centers.size() - 1, s.frequency_index(frequency));
}

}  // namespace heaping
