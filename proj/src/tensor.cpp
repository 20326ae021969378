#include "randtensor/tensor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace rtensor {

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) {
    throw ShapeError("tensor order must be at least 2");
  }
  std::size_t count = 1;
  for (std::size_t n : dims_) {
    if (n == 0) {
      throw ShapeError("tensor dimensions must be positive");
    }
    if (count > std::numeric_limits<std::size_t>::max() / n) {
      throw ShapeError("tensor element count overflows size_t");
    }
    count *= n;
  }
  // Storage is a vector<double>; anything above max_size can never be allocated.
  if (count > std::vector<double>().max_size()) {
    throw ShapeError("tensor element count exceeds addressable storage");
  }
  size_ = count;
}

Shape Shape::parse(std::string_view text) {
  std::vector<std::size_t> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find('x', pos), text.size());
    const std::string_view field = text.substr(pos, next - pos);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw ShapeError("malformed dims string '" + std::string(text) + "'");
    }
    dims.push_back(value);
    pos = next + 1;
  }
  return Shape(std::move(dims));
}

bool Shape::all_dims_equal() const noexcept {
  return std::all_of(dims_.begin(), dims_.end(), [&](std::size_t n) { return n == dims_.front(); });
}

std::string Shape::to_string() const {
  std::string out;
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (j) out += 'x';
    out += std::to_string(dims_[j]);
  }
  return out;
}

std::size_t flat_index(const Shape& shape, std::span<const std::size_t> index) {
  if (index.size() != shape.order()) {
    throw ShapeError("index arity does not match tensor order");
  }
  std::size_t offset = 0;
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (index[j] >= shape.dim(j)) {
      throw std::out_of_range("tensor index out of range in mode " + std::to_string(j));
    }
    offset = offset * shape.dim(j) + index[j];
  }
  return offset;
}

std::size_t flat_index(const Shape& shape, std::initializer_list<std::size_t> index) {
  return flat_index(shape, std::span<const std::size_t>(index.begin(), index.size()));
}

std::vector<std::size_t> multi_index(const Shape& shape, std::size_t offset) {
  if (offset >= shape.size()) {
    throw std::out_of_range("flat offset out of range");
  }
  std::vector<std::size_t> index(shape.order());
  for (std::size_t j = shape.order(); j-- > 0;) {
    index[j] = offset % shape.dim(j);
    offset /= shape.dim(j);
  }
  return index;
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_.size()) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                     shape_.to_string());
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); })) {
    throw std::invalid_argument("tensor entries must be finite");
  }
}

Tensor Tensor::zeros(Shape shape) {
  std::vector<double> data(shape.size(), 0.0);
  return Tensor(std::move(shape), std::move(data));
}

double Tensor::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Tensor Tensor::scaled(double factor) const {
  std::vector<double> out(data_);
  for (double& x : out) x *= factor;
  return Tensor(shape_, std::move(out));
}

namespace {

Tensor combine(const Tensor& a, const Tensor& b, double sign) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError("tensor shapes differ: " + a.shape().to_string() + " vs " + b.shape().to_string());
  }
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + sign * b.data()[i];
  return Tensor(a.shape(), std::move(out));
}

void check_tuple(const Shape& shape, const VectorTuple& u, std::size_t skip_mode) {
  if (u.size() != shape.order()) {
    throw ShapeError("vector tuple has " + std::to_string(u.size()) + " vectors for an order-" +
                     std::to_string(shape.order()) + " tensor");
  }
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (j != skip_mode && u[j].size() != shape.dim(j)) {
      throw ShapeError("vector length mismatch in mode " + std::to_string(j));
    }
  }
}

constexpr std::size_t kNoMode = std::numeric_limits<std::size_t>::max();

// Single pass over the data with an odometer on modes 0..d-2. prefix[k] holds
// the product of u_m[i_m] over m < k, m != skip; the last mode is a dense row.
// With skip == kNoMode the row contributions are summed into out[0].
void contract_pass(const Tensor& t, const VectorTuple& u, std::size_t skip, Vector& out) {
  const auto& dims = t.shape().dims();
  const std::size_t d = dims.size();
  const std::size_t last = dims[d - 1];
  const double* data = t.data().data();

  std::vector<std::size_t> idx(d - 1, 0);
  std::vector<double> prefix(d, 1.0);
  for (std::size_t k = 0; k + 1 < d; ++k) {
    prefix[k + 1] = prefix[k] * (k == skip ? 1.0 : u[k][0]);
  }

  const double* last_vec = skip == d - 1 ? nullptr : u[d - 1].data();
  for (std::size_t base = 0; base < t.size(); base += last) {
    const double w = prefix[d - 1];
    const double* row = data + base;
    if (skip == d - 1) {
      for (std::size_t i = 0; i < last; ++i) out[i] += w * row[i];
    } else {
      double s = 0.0;
      for (std::size_t i = 0; i < last; ++i) s += row[i] * last_vec[i];
      out[skip == kNoMode ? 0 : idx[skip]] += w * s;
    }

    std::size_t k = d - 1;
    while (k-- > 0) {
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
    }
    if (k == kNoMode) break;
    for (std::size_t m = k; m + 1 < d; ++m) {
      prefix[m + 1] = prefix[m] * (m == skip ? 1.0 : u[m][idx[m]]);
    }
  }
}

}  // namespace

Tensor operator+(const Tensor& a, const Tensor& b) { return combine(a, b, 1.0); }
Tensor operator-(const Tensor& a, const Tensor& b) { return combine(a, b, -1.0); }

double rank1_value(const Tensor& t, const VectorTuple& u) {
  check_tuple(t.shape(), u, kNoMode);
  Vector acc(1, 0.0);
  contract_pass(t, u, kNoMode, acc);
  return acc[0];
}

Vector contract_except(const Tensor& t, const VectorTuple& u, std::size_t mode) {
  if (mode >= t.order()) {
    throw ShapeError("contraction mode out of range");
  }
  check_tuple(t.shape(), u, mode);
  Vector g(t.shape().dim(mode), 0.0);
  contract_pass(t, u, mode, g);
  return g;
}

double lp_norm(std::span<const double> v, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("lp_norm requires finite p >= 1");
  }
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  if (p == 2.0) {
    for (double x : v) sum += (x / scale) * (x / scale);
    return scale * std::sqrt(sum);
  }
  for (double x : v) sum += std::pow(std::abs(x) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

double frobenius_norm(const Tensor& t) { return lp_norm(t.data(), 2.0); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("dot product length mismatch");
  }
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

bool is_unit_tuple(const Shape& shape, const VectorTuple& u, double p, double tol) {
  if (u.size() != shape.order()) return false;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j].size() != shape.dim(j)) return false;
    if (std::abs(lp_norm(u[j], p) - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace rtensor
