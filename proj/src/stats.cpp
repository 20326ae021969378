#include "randtensor/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtensor {

MeanEstimate estimate_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("estimate_mean needs at least one value");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

namespace {

constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

// lgamma(n + 1) - (n + 1/2) log n + n - log sqrt(2 pi), without the cancellation.
double stirling_error(double n) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLnSqrt2Pi;
  const double nn = n * n;
  if (n > 500.0) return (s0 - s1 / nn) / n;
  if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / m) + m - x, accurate when x is close to m.
double deviance(double x, double m) {
  if (std::abs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

// Binomial probability mass in the saddle-point form.
double binomial_pmf(double x, double n, double p, double q) {
  if (x == 0.0) return p < 0.5 ? std::exp(n * std::log1p(-p)) : std::pow(q, n);
  if (x == n) return q < 0.5 ? std::exp(n * std::log1p(-q)) : std::pow(p, n);
  const double lc = stirling_error(n) - stirling_error(x) - stirling_error(n - x) - deviance(x, n * p) -
                    deviance(n - x, n * q);
  const double lf = 2.0 * kLnSqrt2Pi + std::log(x) + std::log1p(-x / n);
  return std::exp(lc - 0.5 * lf);
}

}  // namespace

double binomial_cdf(std::size_t k, std::size_t n, double p) {
  if (k >= n || p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  const double q = 1.0 - p;
  const double nn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i <= k; ++i) sum += binomial_pmf(static_cast<double>(i), nn, p, q);
  return std::min(sum, 1.0);
}

double clopper_pearson_upper(std::size_t k, std::size_t n, double confidence) {
  if (n == 0) throw std::invalid_argument("clopper_pearson_upper needs n >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  if (k >= n) return 1.0;
  const double alpha = 1.0 - confidence;
  if (k == 0) return -std::expm1(std::log(alpha) / static_cast<double>(n));
  // The CDF is strictly decreasing in p; bisect to full double resolution.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_cdf(k, n, mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace rtensor
