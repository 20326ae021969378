#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rtensor {

struct SelftestConfig {
  std::size_t product_samples = 10000;
  std::size_t lp_samples = 10000;
  std::size_t lipschitz_pairs = 100;
  int grid_resolution = 360;
  std::uint64_t seed = 20240611;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  /// Smallest (rhs - lhs) observed; negative beyond the tolerance means failure.
  double worst_slack = 0.0;
};

/// Property suites for the inequalities behind the bounds:
///   product-sphere-l2  ||(x)u_j - (x)u'_j||^2 <= sum_j ||u_j - u'_j||^2 on unit l^2 spheres,
///                      d in {2,3,4}, n_j <= 6, slack >= -1e-12
///   product-sphere-lk  the same distance <= 2^(d-1) sum_j prod_{i!=j} n_i^((k-2)/k) ||u_j - u'_j||^2
///                      on unit l^k spheres, k = d in {3,4}
///   lipschitz          |rho(A) - rho(B)| <= ||A - B||_F + tol_A + tol_B on 2x2x2 pairs via grid_oracle
std::vector<CheckResult> run_selftest(const SelftestConfig& cfg = {});

}  // namespace rtensor
