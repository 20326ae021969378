#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "randtensor/tensor.hpp"

namespace rtensor {

enum class ClassTag { IID, Symmetric, PartiallySymmetric, Piezoelectric };

std::string to_string(ClassTag tag);
ClassTag parse_class_tag(std::string_view name);

/// One of the four Gaussian ensembles together with its shape.
///   IID                 any shape, entries N(0,1)
///   Symmetric           n^d, one draw per permutation orbit, variance d/card
///   PartiallySymmetric  (m,n,m,n), one draw per orbit, variance 2/|orbit|
///   Piezoelectric       (n,n,n), symmetric in the last two modes
class TensorClass {
public:
  static TensorClass iid(Shape shape);
  static TensorClass symmetric(std::size_t order, std::size_t n);
  static TensorClass partially_symmetric(std::size_t m, std::size_t n);
  static TensorClass piezoelectric(std::size_t n);

  /// Validates that `shape` is consistent with `tag`.
  TensorClass(ClassTag tag, Shape shape);

  [[nodiscard]] ClassTag tag() const noexcept { return tag_; }
  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }

private:
  ClassTag tag_;
  Shape shape_;
};

/// Applies the splitmix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  /// mix64(master + mix64(index)), injective in each argument separately.
  [[nodiscard]] std::uint64_t substream_seed() const noexcept;

  bool operator==(const SeedSpec&) const = default;
};

SeedSpec derive_substream(std::uint64_t master_seed, std::uint64_t trial_index);

/// Standard normal generator: Marsaglia polar method over a 64-bit Mersenne
/// Twister with 53-bit uniforms. Fully specified, so streams are reproducible.
class NormalSource {
public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}
  explicit NormalSource(const SeedSpec& seed) : NormalSource(seed.substream_seed()) {}

  double operator()();
  /// Uniform on [0, 1).
  double uniform();
  /// Unit l^2 direction in R^n.
  Vector unit_vector(std::size_t n);

private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Number of distinct permutations of the tuple: d! / prod(multiplicity!).
std::uint64_t multiset_orbit_card(std::span<const std::size_t> index_tuple);

using Index4 = std::array<std::size_t, 4>;

/// {(i,j,k,l), (k,j,i,l), (i,l,k,j), (k,l,i,j)} sorted and deduplicated.
std::vector<Index4> partial_sym_orbit(std::size_t i, std::size_t j, std::size_t k, std::size_t l);

Tensor sample(const TensorClass& cls, const SeedSpec& seed);

}  // namespace rtensor
