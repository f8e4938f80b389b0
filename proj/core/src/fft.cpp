#include "heaping/fft.hpp"

#include <numbers>

namespace heaping {

namespace {

using cd = std::complex<double>;

std::size_t smallest_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t f = 3; f * f <= n; f += 2) {
    if (n % f == 0) return f;
  }
  return n;
}

// Decimation in time. `twiddles` holds exp(-2 pi i j / N) for the top-level
// N; a sub-transform of length n reads every (N / n)-th entry.
void transform(const cd* in, std::size_t in_stride, std::size_t n, cd* out,
               const std::vector<cd>& twiddles, std::size_t tw_stride, std::vector<cd>& scratch) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = smallest_factor(n);
  const std::size_t m = n / p;
  for (std::size_t r = 0; r < p; ++r) {
    transform(in + r * in_stride, in_stride * p, m, out + r * m, twiddles, tw_stride * p, scratch);
  }
  if (scratch.size() < p) scratch.resize(p);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t r = 0; r < p; ++r) scratch[r] = out[r * m + k];
    for (std::size_t q = 0; q < p; ++q) {
      const std::size_t j = k + q * m;
      cd sum = scratch[0];
      for (std::size_t r = 1; r < p; ++r) {
        sum += scratch[r] * twiddles[((r * j) % n) * tw_stride];
      }
      out[j] = sum;
    }
  }
}

}  // namespace

std::vector<cd> dft(std::span<const cd> input) {
  const std::size_t n = input.size();
  std::vector<cd> out(n);
  if (n == 0) return out;
  std::vector<cd> twiddles(n);
  for (std::size_t j = 0; j < n; ++j) {
    twiddles[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
  std::vector<cd> scratch;
  transform(input.data(), 1, n, out.data(), twiddles, 1, scratch);
  return out;
}

std::vector<cd> dft(std::span<const double> input) {
  std::vector<cd> complex_input(input.begin(), input.end());
  return dft(std::span<const cd>(complex_input));
}

}  // namespace heaping
