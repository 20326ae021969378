#include "randtensor/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "randtensor/grid_oracle.hpp"
#include "randtensor/sampler.hpp"
#include "randtensor/tensor.hpp"

namespace rtensor {

namespace {

// Kronecker product of the tuple: entries u_{1,i_1} ... u_{d,i_d} in row-major order.
Vector outer(const VectorTuple& u) {
  Vector out{1.0};
  for (const auto& v : u) {
    Vector next;
    next.reserve(out.size() * v.size());
    for (double a : out)
      for (double b : v) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

double squared_distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

Vector unit_in(NormalSource& src, std::size_t n, double p) {
  Vector v = src.unit_vector(n);
  const double norm = lp_norm(v, p);
  for (double& x : v) x /= norm;
  return v;
}

// u' is independent of u, a small perturbation of it, or its negation, cycling
// so that near-equality and far-apart regimes are both exercised.
Vector partner(NormalSource& src, const Vector& u, double p, std::size_t regime) {
  switch (regime % 3) {
    case 0: return unit_in(src, u.size(), p);
    case 1: {
      const double eps = std::pow(10.0, -1.0 - 5.0 * src.uniform());
      Vector v = u;
      for (double& x : v) x += eps * src();
      const double norm = lp_norm(v, p);
      for (double& x : v) x /= norm;
      return v;
    }
    default: {
      Vector v = u;
      for (double& x : v) x = -x;
      return v;
    }
  }
}

// Half of the tuples use one partner kind for every factor (all perturbed
// gives the near-equality regime); the other half mix kinds across factors.
std::size_t regime_for(std::size_t sample, std::size_t factor) {
  const std::size_t kind = sample / 6;
  return (sample / 3) % 2 == 0 ? kind : kind + factor;
}

CheckResult product_sphere_check(const SelftestConfig& cfg) {
  NormalSource src(derive_substream(cfg.seed, 1));
  CheckResult r{"product-sphere-l2", true, 0, std::numeric_limits<double>::infinity()};
  for (std::size_t s = 0; s < cfg.product_samples; ++s) {
    const std::size_t d = 2 + s % 3;
    VectorTuple u, w;
    double rhs = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const auto n = 1 + static_cast<std::size_t>(6.0 * src.uniform());
      u.push_back(unit_in(src, n, 2.0));
      w.push_back(partner(src, u.back(), 2.0, regime_for(s, j)));
      rhs += squared_distance(u.back(), w.back());
    }
    const double slack = rhs - squared_distance(outer(u), outer(w));
    r.worst_slack = std::min(r.worst_slack, slack);
    ++r.cases;
  }
  r.passed = r.worst_slack >= -1e-12;
  return r;
}

CheckResult lp_sphere_check(const SelftestConfig& cfg) {
  NormalSource src(derive_substream(cfg.seed, 2));
  CheckResult r{"product-sphere-lk", true, 0, std::numeric_limits<double>::infinity()};
  for (std::size_t s = 0; s < cfg.lp_samples; ++s) {
    const std::size_t d = 3 + s % 2;
    const double k = static_cast<double>(d);
    VectorTuple u, w;
    std::vector<double> dims;
    for (std::size_t j = 0; j < d; ++j) {
      const auto n = 1 + static_cast<std::size_t>(6.0 * src.uniform());
      dims.push_back(static_cast<double>(n));
      u.push_back(unit_in(src, n, k));
      w.push_back(partner(src, u.back(), k, regime_for(s, j)));
    }
    double rhs = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double weight = 1.0;
      for (std::size_t i = 0; i < d; ++i)
        if (i != j) weight *= std::pow(dims[i], (k - 2.0) / k);
      rhs += weight * squared_distance(u[j], w[j]);
    }
    rhs *= std::pow(2.0, k - 1.0);
    const double slack = rhs - squared_distance(outer(u), outer(w));
    r.worst_slack = std::min(r.worst_slack, slack);
    ++r.cases;
  }
  r.passed = r.worst_slack >= -1e-12;
  return r;
}

CheckResult lipschitz_check(const SelftestConfig& cfg) {
  CheckResult r{"lipschitz-spectral-norm", true, 0, std::numeric_limits<double>::infinity()};
  const TensorClass cls = TensorClass::iid(Shape{2, 2, 2});
  NormalSource src(derive_substream(cfg.seed, 3));
  for (std::size_t s = 0; s < cfg.lipschitz_pairs; ++s) {
    const Tensor a = sample(cls, derive_substream(cfg.seed, 1000 + 2 * s));
    const Tensor noise = sample(cls, derive_substream(cfg.seed, 1001 + 2 * s));
    const double scales[] = {1e-3, 1e-1, 1.0, 3.0};
    const Tensor b = a + noise.scaled(scales[s % 4] * (0.5 + src.uniform()));
    const double ga = grid_oracle(a, SpectralFunctional::L2Singular, cfg.grid_resolution);
    const double gb = grid_oracle(b, SpectralFunctional::L2Singular, cfg.grid_resolution);
    const double allowance = frobenius_norm(a - b) + grid_tolerance(a, SpectralFunctional::L2Singular, cfg.grid_resolution) +
                             grid_tolerance(b, SpectralFunctional::L2Singular, cfg.grid_resolution);
    r.worst_slack = std::min(r.worst_slack, allowance - std::abs(ga - gb));
    ++r.cases;
  }
  r.passed = r.worst_slack >= 0.0;
  return r;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestConfig& cfg) {
  return {product_sphere_check(cfg), lp_sphere_check(cfg), lipschitz_check(cfg)};
}

}  // namespace rtensor
