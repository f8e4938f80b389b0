#pragma once

#include <complex>
#include <span>
#include <vector>

namespace heaping {

/// Forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N), for any length N.
/// Mixed-radix Cooley-Tukey over the prime factors of N; prime lengths
/// fall back to one O(N^2) butterfly.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> input);
std::vector<std::complex<double>> dft(std::span<const double> input);

}  // namespace heaping
