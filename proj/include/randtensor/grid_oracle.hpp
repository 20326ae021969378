#pragma once

#include "randtensor/solver.hpp"
#include "randtensor/tensor.hpp"

namespace rtensor {

/// Brute-force ground truth for tiny instances.
///
/// Supported: order 2 of any size (solved exactly by the eigensolver), or
/// every n_j = 2 with order 3 or 4. On the 2-dim case each unit circle (l^2,
/// or l^d via radial projection) is parametrized by K equispaced angles. The
/// last free vector is always resolved in closed form:
///   L2Singular / LdSingular  grid over modes 0..d-2, then ||g||_2 or ||g||_{d/(d-1)}
///   ZEig / HEig              grid over the single vector u
///   MEig (2,2,2,2)           grid over u, top eigenvalue of the 2x2 B(u)
///   CEig (2,2,2)             grid over v, ||w(v)||_2
bool grid_supported(const Shape& shape, SpectralFunctional f);

double grid_oracle(const Tensor& t, SpectralFunctional f, int resolution);

/// Bound on |grid_oracle - true max|: Lip * pi / K with Lip = d ||A||_F on l^2
/// spheres, times 2 sqrt(2) 2^((d-1)(d-2)/(2d)) on l^d spheres (parametrization
/// speed and the l^2 size of l^d-unit vectors). Exact order-2 paths report
/// 1e-12 ||A||_F.
double grid_tolerance(const Tensor& t, SpectralFunctional f, int resolution);

}  // namespace rtensor
