#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace heaping::oracle {

std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j) - 1] + row[static_cast<std::size_t>(j)];
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(k)];
}

std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    pmf[static_cast<std::size_t>(k)] =
        static_cast<double>(choose(n, k)) * std::pow(p, k) * std::pow(1.0 - p, n - k);
  }
  return pmf;
}

namespace {
long double factorial(int n) {
  long double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
long double beta_fn(int a, int b) { return factorial(a - 1) * factorial(b - 1) / factorial(a + b - 1); }
}  // namespace

std::vector<double> beta_binomial_pmf(int n, int a, int b) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    pmf[static_cast<std::size_t>(k)] = static_cast<double>(static_cast<long double>(choose(n, k)) *
                                                           beta_fn(k + a, n - k + b) / beta_fn(a, b));
  }
  return pmf;
}

std::vector<double> clustered_pmf(int n, int c, double p) {
  const auto whole = binomial_pmf(n / c, p);
  const auto rest = binomial_pmf(n % c, p);
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::size_t i = 0; i < whole.size(); ++i) {
    for (std::size_t j = 0; j < rest.size(); ++j) pmf[i * static_cast<std::size_t>(c) + j] += whole[i] * rest[j];
  }
  return pmf;
}

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      sum += x[j] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = sum;
  }
  return out;
}

std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
  return naive_dft(std::vector<std::complex<double>>(x.begin(), x.end()));
}

double ks_uniform_statistic(std::vector<double> s) {
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - s[i]);
    d = std::max(d, s[i] - static_cast<double>(i) / n);
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  // Kolmogorov distribution with Stephens' small-sample correction.
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double max_standard_error_ratio(const std::vector<double>& pmf, const std::vector<std::uint64_t>& counts,
                                std::uint64_t draws) {
  double worst = 0.0;
  const double n = static_cast<double>(draws);
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double expected = pmf[k];
    const double observed = static_cast<double>(counts[k]) / n;
    const double se = std::sqrt(expected * (1.0 - expected) / n);
    if (se == 0.0) {
      if (observed != expected) return INFINITY;
      continue;
    }
    worst = std::max(worst, std::fabs(observed - expected) / se);
  }
  return worst;
}

}  // namespace heaping::oracle
