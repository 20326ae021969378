#pragma once

#include <optional>

#include "randtensor/solver.hpp"
#include "randtensor/tensor.hpp"

namespace rtensor {

/// Gamma function for x > 0: Lanczos approximation (g = 607/128, 15 terms),
/// reflection below 1/2. Relative error below 1e-13 on the tested range.
double gamma_fn(double x);
double log_gamma_fn(double x);

/// E|h|^p for h ~ N(0,1): 2^(p/2) Gamma((p+1)/2) / sqrt(pi).
double gaussian_abs_moment(double p);

/// Upper bounds on E rho for the four Gaussian ensembles.
///
///   L2Singular  sum_j sqrt(n_j)
///   LdSingular  loose 2^((d-1)/2) prod_j n_j^((d-2)/(2d)) sum_j sqrt(n_j);
///               exact = loose * (E|h|^p)^(1/p), p = d/(d-1)
///   ZEig        d sqrt(n)
///   HEig        loose d 2^((d-1)/2) n^((d-1)/2); exact = loose * (E|h|^p)^(1/p)
///   MEig        2 sqrt(m) + 2 sqrt(n)        shape (m,n,m,n)
///   CEig        3 sqrt(n)                    shape (n,n,n)
///
/// The exact form equals 2^(d/2) (pi^(-1/2) Gamma(1/(2(d-1)) + 1))^((d-1)/d) times
/// the dimension factor. Products are accumulated in log space.
struct BoundReport {
  SpectralFunctional functional;
  Shape shape;
  std::optional<double> bound_exact;
  double bound_loose;
  std::optional<double> tail_shift;
  std::optional<double> tail_probability;

  /// The tightest stated bound: exact when present, else loose.
  [[nodiscard]] double applicable() const { return bound_exact.value_or(bound_loose); }
};

BoundReport bound(SpectralFunctional f, const Shape& shape);
BoundReport bound(SpectralFunctional f, const Shape& shape, double tail_shift);

/// Gaussian concentration tail exp(-t^2 / 2), t > 0.
double tail_prob(double t);

}  // namespace rtensor
