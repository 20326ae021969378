#include "randtensor/bounds.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtensor {

namespace {

constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoeffs{
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

// Series part of the Lanczos form at z = x - 1.
double lanczos_sum(double z) {
  double sum = kLanczosCoeffs[0];
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) sum += kLanczosCoeffs[k] / (z + static_cast<double>(k));
  return sum;
}

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("gamma_fn requires finite x > 0");
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::exp(kLogSqrt2Pi + (z + 0.5) * std::log(t) - t) * lanczos_sum(z);
}

double log_gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("log_gamma_fn requires finite x > 0");
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma_fn(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return kLogSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

double gaussian_abs_moment(double p) {
  if (!(p > 0.0)) throw std::domain_error("moment order must be positive");
  if (p == 2.0) return 1.0;
  return std::exp(0.5 * p * std::numbers::ln2 + log_gamma_fn(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi));
}

namespace {

using SF = SpectralFunctional;

// log (E|h|^p)^(1/p) with p = d/(d-1). Zero at d = 2, where E h^2 = 1 exactly.
double log_moment_factor(std::size_t d) {
  if (d == 2) return 0.0;
  const double p = static_cast<double>(d) / static_cast<double>(d - 1);
  return std::log(gaussian_abs_moment(p)) / p;
}

double sum_sqrt(const Shape& shape) {
  double s = 0.0;
  for (std::size_t n : shape.dims()) s += std::sqrt(static_cast<double>(n));
  return s;
}

}  // namespace

BoundReport bound(SpectralFunctional f, const Shape& shape) {
  const auto& dims = shape.dims();
  const std::size_t order = shape.order();
  const double d = static_cast<double>(order);
  BoundReport report{f, shape, std::nullopt, 0.0, std::nullopt, std::nullopt};
  switch (f) {
    case SF::L2Singular:
      report.bound_loose = sum_sqrt(shape);
      break;
    case SF::LdSingular: {
      double log_prod = 0.0;
      for (std::size_t n : dims) log_prod += std::log(static_cast<double>(n));
      const double log_loose = 0.5 * (d - 1.0) * std::numbers::ln2 + (d - 2.0) / (2.0 * d) * log_prod +
                               std::log(sum_sqrt(shape));
      report.bound_loose = std::exp(log_loose);
      report.bound_exact = std::exp(log_loose + log_moment_factor(order));
      break;
    }
    case SF::ZEig:
    case SF::HEig: {
      if (!shape.all_dims_equal()) throw ShapeError(to_string(f) + " bound requires shape n^d");
      const double n = static_cast<double>(dims[0]);
      if (f == SF::ZEig) {
        report.bound_loose = d * std::sqrt(n);
        break;
      }
      const double log_loose = std::log(d) + 0.5 * (d - 1.0) * (std::numbers::ln2 + std::log(n));
      report.bound_loose = std::exp(log_loose);
      report.bound_exact = std::exp(log_loose + log_moment_factor(order));
      break;
    }
    case SF::MEig:
      if (order != 4 || dims[0] != dims[2] || dims[1] != dims[3]) {
        throw ShapeError("meig bound requires shape (m,n,m,n)");
      }
      report.bound_loose = 2.0 * std::sqrt(static_cast<double>(dims[0])) + 2.0 * std::sqrt(static_cast<double>(dims[1]));
      break;
    case SF::CEig:
      if (order != 3 || !shape.all_dims_equal()) throw ShapeError("ceig bound requires shape (n,n,n)");
      report.bound_loose = 3.0 * std::sqrt(static_cast<double>(dims[0]));
      break;
  }
  return report;
}

BoundReport bound(SpectralFunctional f, const Shape& shape, double tail_shift) {
  BoundReport report = bound(f, shape);
  report.tail_probability = tail_prob(tail_shift);
  report.tail_shift = tail_shift;
  return report;
}

double tail_prob(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("tail_prob requires finite t > 0");
  return std::exp(-0.5 * t * t);
}

}  // namespace rtensor
