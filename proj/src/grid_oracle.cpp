#include "randtensor/grid_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace rtensor {

namespace {

using SF = SpectralFunctional;

bool all_two(const Shape& shape) {
  return std::all_of(shape.dims().begin(), shape.dims().end(), [](std::size_t n) { return n == 2; });
}

// K points on the unit circle of the l^p norm, by radial projection of the l^2 circle.
std::vector<std::array<double, 2>> circle(int k, double p) {
  std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / k;
    std::array<double, 2> c{std::cos(theta), std::sin(theta)};
    const double norm = lp_norm(c, p);
    pts[static_cast<std::size_t>(i)] = {c[0] / norm, c[1] / norm};
  }
  return pts;
}

double singular_grid(const Tensor& t, bool ld, int k) {
  const std::size_t d = t.order();
  const double p = ld ? static_cast<double>(d) : 2.0;
  const double dual = ld ? p / (p - 1.0) : 2.0;
  const auto pts = circle(k, p);
  const auto a = t.data();
  const std::size_t free_modes = d - 1;
  const std::size_t combos = std::size_t{1} << free_modes;

  std::vector<std::size_t> angle(free_modes, 0);
  std::vector<double> weight(combos);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    // weight[c] = prod_m u_m[bit m of c], modes ordered most significant first.
    for (std::size_t c = 0; c < combos; ++c) {
      double w = 1.0;
      for (std::size_t m = 0; m < free_modes; ++m) {
        const std::size_t bit = (c >> (free_modes - 1 - m)) & 1U;
        w *= pts[angle[m]][bit];
      }
      weight[c] = w;
    }
    std::array<double, 2> g{0.0, 0.0};
    for (std::size_t c = 0; c < combos; ++c) {
      g[0] += weight[c] * a[2 * c];
      g[1] += weight[c] * a[2 * c + 1];
    }
    best = std::max(best, lp_norm(g, dual));

    std::size_t m = free_modes;
    while (m > 0 && ++angle[m - 1] == static_cast<std::size_t>(k)) {
      angle[m - 1] = 0;
      --m;
    }
    if (m == 0) break;
  }
  return best;
}

double symmetric_grid(const Tensor& t, bool ld, int k) {
  const std::size_t d = t.order();
  const auto pts = circle(k, ld ? static_cast<double>(d) : 2.0);
  const auto a = t.data();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& u : pts) {
    double f = 0.0;
    for (std::size_t offset = 0; offset < t.size(); ++offset) {
      double w = a[offset];
      for (std::size_t m = 0; m < d; ++m) w *= u[(offset >> (d - 1 - m)) & 1U];
      f += w;
    }
    best = std::max(best, f);
  }
  return best;
}

double m_eigen_grid(const Tensor& t, int k) {
  const auto pts = circle(k, 2.0);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& u : pts) {
    double b[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t kk = 0; kk < 2; ++kk)
          for (std::size_t l = 0; l < 2; ++l) b[j][l] += u[i] * u[kk] * t.at({i, j, kk, l});
    const double off = 0.5 * (b[0][1] + b[1][0]);
    const double mean = 0.5 * (b[0][0] + b[1][1]);
    const double half_gap = 0.5 * (b[0][0] - b[1][1]);
    best = std::max(best, mean + std::hypot(half_gap, off));
  }
  return best;
}

double c_eigen_grid(const Tensor& t, int k) {
  const auto pts = circle(k, 2.0);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : pts) {
    std::array<double, 2> w{0.0, 0.0};
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t kk = 0; kk < 2; ++kk) w[i] += t.at({i, j, kk}) * v[j] * v[kk];
    best = std::max(best, lp_norm(w, 2.0));
  }
  return best;
}

}  // namespace

bool grid_supported(const Shape& shape, SpectralFunctional f) {
  const std::size_t d = shape.order();
  switch (f) {
    case SF::L2Singular:
    case SF::LdSingular:
    case SF::ZEig:
    case SF::HEig:
      return d == 2 || (d <= 4 && all_two(shape));
    case SF::MEig:
      return d == 4 && all_two(shape);
    case SF::CEig:
      return d == 3 && all_two(shape);
  }
  return false;
}

double grid_oracle(const Tensor& t, SpectralFunctional f, int resolution) {
  if (!grid_supported(t.shape(), f)) {
    throw std::invalid_argument("grid oracle does not support " + to_string(f) + " on shape " +
                                t.shape().to_string());
  }
  if (resolution < 4) throw std::invalid_argument("grid resolution must be at least 4");
  check_compatible(t, f);
  if (t.order() == 2) return solve(t, f).value;
  switch (f) {
    case SF::L2Singular: return singular_grid(t, false, resolution);
    case SF::LdSingular: return singular_grid(t, true, resolution);
    case SF::ZEig: return symmetric_grid(t, false, resolution);
    case SF::HEig: return symmetric_grid(t, true, resolution);
    case SF::MEig: return m_eigen_grid(t, resolution);
    case SF::CEig: return c_eigen_grid(t, resolution);
  }
  return 0.0;
}

double grid_tolerance(const Tensor& t, SpectralFunctional f, int resolution) {
  const double fro = frobenius_norm(t);
  if (t.order() == 2) return 1e-12 * fro;
  const double d = static_cast<double>(t.order());
  double lip = d * fro;
  if (uses_ld_sphere(f)) lip *= 2.0 * std::numbers::sqrt2 * std::pow(2.0, (d - 1.0) * (d - 2.0) / (2.0 * d));
  return lip * std::numbers::pi / resolution;
}

}  // namespace rtensor
