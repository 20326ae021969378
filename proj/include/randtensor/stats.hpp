#pragma once

#include <cstddef>
#include <span>

namespace rtensor {

struct MeanEstimate {
  double mean = 0.0;
  /// Sample standard deviation over sqrt(N); zero when N = 1.
  double std_error = 0.0;
};

MeanEstimate estimate_mean(std::span<const double> values);

/// P(X <= k) for X ~ Binomial(n, p).
double binomial_cdf(std::size_t k, std::size_t n, double p);

/// Exact one-sided upper confidence limit on a binomial proportion after k
/// successes in n trials: the p solving P(X <= k; n, p) = 1 - confidence.
double clopper_pearson_upper(std::size_t k, std::size_t n, double confidence = 0.99);

}  // namespace rtensor
