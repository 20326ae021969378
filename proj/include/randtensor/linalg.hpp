#pragma once

#include <cstddef>
#include <vector>

#include "randtensor/tensor.hpp"

namespace rtensor {

/// Small dense row-major matrix.
class Matrix {
public:
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  [[nodiscard]] Vector apply(const Vector& x) const;
  [[nodiscard]] double frobenius() const;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
};

struct SymmetricEigen {
  Vector values;               // ascending
  std::vector<Vector> vectors; // vectors[k] pairs with values[k]
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass is at most
/// 1e-14 * ||M||_F. Throws if M is not square or not symmetric to 1e-12 * ||M||_F.
SymmetricEigen jacobi_eigen(const Matrix& m);

struct EigenPair {
  double value;
  Vector vector;
};

/// Largest (algebraic) eigenvalue and a unit eigenvector.
EigenPair top_eig_symmetric(const Matrix& m);

/// Gram matrix A^T A of an order-2 tensor viewed as a matrix.
Matrix gram(const Tensor& matrix);

}  // namespace rtensor
