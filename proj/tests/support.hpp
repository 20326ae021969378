#pragma once

// Statistical helpers shared by the unit tests and the acceptance binary.
// They lean on Boost.Math so the reference quantiles are independent of the
// library's own numerics.

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/binomial.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "randtensor/sampler.hpp"
#include "randtensor/tensor.hpp"

namespace rtensor::oracle {

struct VarianceCheck {
  double sample_variance = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] bool pass() const { return lo <= sample_variance && sample_variance <= hi; }
};

// Two-sided chi-square interval at the given level for the unbiased sample
// variance of N normal draws whose true variance is sigma2.
inline VarianceCheck chi_square_variance(const std::vector<double>& xs, double sigma2, double level = 0.999) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const boost::math::chi_squared dist(n - 1.0);
  const double alpha = 1.0 - level;
  VarianceCheck c;
  c.sample_variance = ss / (n - 1.0);
  c.lo = sigma2 * boost::math::quantile(dist, alpha / 2) / (n - 1.0);
  c.hi = sigma2 * boost::math::quantile(dist, 1.0 - alpha / 2) / (n - 1.0);
  return c;
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Collect the listed flat positions over `draws` independent tensors.
inline std::vector<std::vector<double>> collect_entries(const TensorClass& cls, const std::vector<std::size_t>& flats,
                                                       std::size_t draws, std::uint64_t master) {
  std::vector<std::vector<double>> out(flats.size());
  for (auto& v : out) v.reserve(draws);
  for (std::size_t s = 0; s < draws; ++s) {
    const Tensor t = sample(cls, derive_substream(master, s));
    for (std::size_t k = 0; k < flats.size(); ++k) out[k].push_back(t.data()[flats[k]]);
  }
  return out;
}

struct CalibrationCase {
  const char* label;
  TensorClass cls;
  std::vector<std::size_t> index;
  double variance;
};

// Entries whose variances are fixed by the ensemble definitions: symmetric
// d=3 orbit sizes 1/3/6, partially symmetric orbit sizes 1/2/4, piezoelectric
// diagonal and off-diagonal.
inline std::vector<CalibrationCase> calibration_cases() {
  const TensorClass sym = TensorClass::symmetric(3, 3);
  const TensorClass psym = TensorClass::partially_symmetric(2, 2);
  const TensorClass piezo = TensorClass::piezoelectric(2);
  return {
      {"symmetric card 1 (0,0,0)", sym, {0, 0, 0}, 3.0},
      {"symmetric card 3 (0,0,1)", sym, {0, 0, 1}, 1.0},
      {"symmetric card 6 (0,1,2)", sym, {0, 1, 2}, 0.5},
      {"partially symmetric orbit 1 (0,0,0,0)", psym, {0, 0, 0, 0}, 2.0},
      {"partially symmetric orbit 2 (0,0,0,1)", psym, {0, 0, 0, 1}, 1.0},
      {"partially symmetric orbit 4 (0,0,1,1)", psym, {0, 0, 1, 1}, 0.5},
      {"piezoelectric diagonal (1,0,0)", piezo, {1, 0, 0}, 2.0},
      {"piezoelectric off-diagonal (0,0,1)", piezo, {0, 0, 1}, 1.0},
  };
}

}  // namespace rtensor::oracle
