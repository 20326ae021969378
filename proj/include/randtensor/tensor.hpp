#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rtensor {

class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Dimensions (n_1, ..., n_d) of a dense tensor, d >= 2, every n_j >= 1.
class Shape {
public:
  explicit Shape(std::vector<std::size_t> dims);
  Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

  /// Parses the `x`-joined form, e.g. "4x9x16".
  static Shape parse(std::string_view text);

  [[nodiscard]] std::size_t order() const noexcept { return dims_.size(); }
  [[nodiscard]] std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool all_dims_equal() const noexcept;
  [[nodiscard]] std::string to_string() const;

  bool operator==(const Shape& other) const { return dims_ == other.dims_; }

private:
  std::vector<std::size_t> dims_;
  std::size_t size_ = 0;
};

using Vector = std::vector<double>;

/// One vector per mode. Vector j has length n_j of the associated shape.
using VectorTuple = std::vector<Vector>;

/// Row-major offset (last index fastest).
std::size_t flat_index(const Shape& shape, std::span<const std::size_t> index);
std::size_t flat_index(const Shape& shape, std::initializer_list<std::size_t> index);

/// Inverse of flat_index.
std::vector<std::size_t> multi_index(const Shape& shape, std::size_t offset);

/// Dense real tensor. Immutable once built; all entries finite.
class Tensor {
public:
  Tensor(Shape shape, std::vector<double> data);

  static Tensor zeros(Shape shape);

  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t order() const noexcept { return shape_.order(); }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

  [[nodiscard]] double operator()(std::span<const std::size_t> index) const {
    return data_[flat_index(shape_, index)];
  }
  [[nodiscard]] double at(std::initializer_list<std::size_t> index) const {
    return data_[flat_index(shape_, index)];
  }
  [[nodiscard]] double max_abs() const noexcept;
  [[nodiscard]] Tensor scaled(double factor) const;

private:
  Shape shape_;
  std::vector<double> data_;
};

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);

/// Multilinear form <A, u_1 (x) ... (x) u_d>.
double rank1_value(const Tensor& t, const VectorTuple& u);

/// Gradient of the multilinear form in `mode`: contracts every other mode with
/// its vector. u[mode] is ignored and may have any length.
Vector contract_except(const Tensor& t, const VectorTuple& u, std::size_t mode);

double lp_norm(std::span<const double> v, double p);
double frobenius_norm(const Tensor& t);

double dot(std::span<const double> a, std::span<const double> b);

/// True when every vector has the shape's length and unit l^p norm within tol.
bool is_unit_tuple(const Shape& shape, const VectorTuple& u, double p, double tol = 1e-12);

}  // namespace rtensor
