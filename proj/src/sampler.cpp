#include "randtensor/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rtensor {

std::string to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::IID: return "iid";
    case ClassTag::Symmetric: return "symmetric";
    case ClassTag::PartiallySymmetric: return "partially-symmetric";
    case ClassTag::Piezoelectric: return "piezoelectric";
  }
  return "unknown";
}

ClassTag parse_class_tag(std::string_view name) {
  if (name == "iid") return ClassTag::IID;
  if (name == "symmetric") return ClassTag::Symmetric;
  if (name == "partially-symmetric") return ClassTag::PartiallySymmetric;
  if (name == "piezoelectric") return ClassTag::Piezoelectric;
  throw std::invalid_argument("unknown tensor class '" + std::string(name) + "'");
}

TensorClass::TensorClass(ClassTag tag, Shape shape) : tag_(tag), shape_(std::move(shape)) {
  const auto& dims = shape_.dims();
  switch (tag_) {
    case ClassTag::IID:
      break;
    case ClassTag::Symmetric:
      if (!shape_.all_dims_equal()) throw ShapeError("symmetric class requires shape n^d");
      break;
    case ClassTag::PartiallySymmetric:
      if (dims.size() != 4 || dims[0] != dims[2] || dims[1] != dims[3]) {
        throw ShapeError("partially symmetric class requires shape (m,n,m,n)");
      }
      break;
    case ClassTag::Piezoelectric:
      if (dims.size() != 3 || !shape_.all_dims_equal()) {
        throw ShapeError("piezoelectric class requires shape (n,n,n)");
      }
      break;
  }
}

TensorClass TensorClass::iid(Shape shape) { return {ClassTag::IID, std::move(shape)}; }

TensorClass TensorClass::symmetric(std::size_t order, std::size_t n) {
  return {ClassTag::Symmetric, Shape(std::vector<std::size_t>(order, n))};
}

TensorClass TensorClass::partially_symmetric(std::size_t m, std::size_t n) {
  return {ClassTag::PartiallySymmetric, Shape{m, n, m, n}};
}

TensorClass TensorClass::piezoelectric(std::size_t n) { return {ClassTag::Piezoelectric, Shape{n, n, n}}; }

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t SeedSpec::substream_seed() const noexcept { return mix64(master_seed + mix64(stream_index)); }

SeedSpec derive_substream(std::uint64_t master_seed, std::uint64_t trial_index) {
  return SeedSpec{master_seed, trial_index};
}

double NormalSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double NormalSource::operator()() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = y * factor;
  return x * factor;
}

Vector NormalSource::unit_vector(std::size_t n) {
  Vector v(n);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = (*this)();
    norm = lp_norm(v, 2.0);
  }
  for (double& x : v) x /= norm;
  return v;
}

std::uint64_t multiset_orbit_card(std::span<const std::size_t> index_tuple) {
  if (index_tuple.size() < 2) {
    throw std::invalid_argument("orbit cardinality needs at least two indices");
  }
  std::map<std::size_t, std::uint64_t> multiplicity;
  for (std::size_t i : index_tuple) ++multiplicity[i];
  // Multinomial coefficient as a product of binomials; every partial result is an integer.
  std::uint64_t card = 1;
  std::uint64_t placed = 0;
  for (const auto& [value, count] : multiplicity) {
    for (std::uint64_t r = 1; r <= count; ++r) {
      card = card * (placed + r) / r;
    }
    placed += count;
  }
  return card;
}

std::vector<Index4> partial_sym_orbit(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  std::vector<Index4> orbit{{i, j, k, l}, {k, j, i, l}, {i, l, k, j}, {k, l, i, j}};
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return orbit;
}

namespace {

std::vector<double> sample_iid(const Shape& shape, NormalSource& normal) {
  std::vector<double> data(shape.size());
  for (double& x : data) x = normal();
  return data;
}

std::vector<double> sample_symmetric(const Shape& shape, NormalSource& normal) {
  const std::size_t d = shape.order();
  const std::size_t n = shape.dim(0);
  std::vector<double> data(shape.size(), 0.0);

  // Non-decreasing tuples in lexicographic order are the orbit representatives.
  std::vector<std::size_t> rep(d, 0);
  while (true) {
    const double variance = static_cast<double>(d) / static_cast<double>(multiset_orbit_card(rep));
    const double value = std::sqrt(variance) * normal();
    std::vector<std::size_t> perm = rep;
    do {
      data[flat_index(shape, perm)] = value;
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::size_t k = d;
    while (k > 0 && rep[k - 1] == n - 1) --k;
    if (k == 0) break;
    const std::size_t next = rep[k - 1] + 1;
    std::fill(rep.begin() + static_cast<std::ptrdiff_t>(k - 1), rep.end(), next);
  }
  return data;
}

std::vector<double> sample_partially_symmetric(const Shape& shape, NormalSource& normal) {
  std::vector<double> data(shape.size(), 0.0);
  for (std::size_t offset = 0; offset < shape.size(); ++offset) {
    const auto idx = multi_index(shape, offset);
    const auto orbit = partial_sym_orbit(idx[0], idx[1], idx[2], idx[3]);
    if (orbit.front() != Index4{idx[0], idx[1], idx[2], idx[3]}) continue;
    const double variance = 2.0 / static_cast<double>(orbit.size());
    const double value = std::sqrt(variance) * normal();
    for (const auto& member : orbit) data[flat_index(shape, member)] = value;
  }
  return data;
}

std::vector<double> sample_piezoelectric(const Shape& shape, NormalSource& normal) {
  const std::size_t n = shape.dim(0);
  std::vector<double> data(shape.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      data[flat_index(shape, {i, j, j})] = std::sqrt(2.0) * normal();
      for (std::size_t k = j + 1; k < n; ++k) {
        const double value = normal();
        data[flat_index(shape, {i, j, k})] = value;
        data[flat_index(shape, {i, k, j})] = value;
      }
    }
  }
  return data;
}

}  // namespace

Tensor sample(const TensorClass& cls, const SeedSpec& seed) {
  NormalSource normal(seed);
  std::vector<double> data;
  switch (cls.tag()) {
    case ClassTag::IID: data = sample_iid(cls.shape(), normal); break;
    case ClassTag::Symmetric: data = sample_symmetric(cls.shape(), normal); break;
    case ClassTag::PartiallySymmetric: data = sample_partially_symmetric(cls.shape(), normal); break;
    case ClassTag::Piezoelectric: data = sample_piezoelectric(cls.shape(), normal); break;
  }
  return Tensor(cls.shape(), std::move(data));
}

}  // namespace rtensor
