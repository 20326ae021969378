#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "randtensor/sampler.hpp"
#include "randtensor/tensor.hpp"

namespace rtensor {

enum class SpectralFunctional { L2Singular, LdSingular, ZEig, HEig, MEig, CEig };

std::string to_string(SpectralFunctional f);
SpectralFunctional parse_functional(std::string_view name);

/// True for functionals maximized over unit l^d spheres (LdSingular, HEig).
bool uses_ld_sphere(SpectralFunctional f) noexcept;

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  int restarts = 32;
  int max_iters = 500;
  /// Relative objective change that ends a start.
  double tol = 1e-10;
  /// Initial shift for ZEig/HEig. Unset: (d + 1) * max|entry|, adapted during the run.
  std::optional<double> shift;
  SeedSpec rng{};
  /// Keep the objective sequence of every start in SolveResult::traces.
  bool record_traces = false;

  void validate() const;
};

struct SolveResult {
  SpectralFunctional functional = SpectralFunctional::L2Singular;
  double value = 0.0;
  /// Full d-tuple at which the value is attained, so rank1_value(t, argmax) == value.
  /// ZEig/HEig: (u,...,u); MEig: (u,v,u,v); CEig: (u,v,v).
  VectorTuple argmax;
  long iterations_total = 0;
  /// Whether the start that produced `value` met the tolerance.
  bool converged = false;
  int starts = 0;
  int degenerate_restarts = 0;
  std::vector<std::vector<double>> traces;
};

/// Unit l^d vector maximizing <g, u>: u_i ~ sign(g_i)|g_i|^(1/(d-1)).
/// The maximum equals ||g||_{d/(d-1)}.
Vector dual_norm_maximizer(std::span<const double> g, std::size_t d);

/// Throws SolverError unless the tensor has the shape and symmetry `f` needs
/// (checked to 1e-12 relative to max|entry|).
void check_compatible(const Tensor& t, SpectralFunctional f);

/// Best value of the multi-start monotone ascent for `f`. The result is a
/// feasible-point value, hence a lower bound on the true maximum. Order-2
/// inputs are solved exactly through the symmetric eigensolver.
SolveResult solve(const Tensor& t, SpectralFunctional f, const SolverConfig& cfg = {});

}  // namespace rtensor
