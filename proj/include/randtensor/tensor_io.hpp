#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "randtensor/tensor.hpp"

namespace rtensor {

// RTB1 layout: "RTB1" | u8 order | order x u32le dims | prod(dims) x f64le, row-major.

class TensorFileError : public std::runtime_error {
public:
  enum class Kind { Io, MalformedHeader, LengthMismatch, NonFinite };

  TensorFileError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

void write_tensor(const Tensor& t, std::ostream& out);
void write_tensor(const Tensor& t, const std::filesystem::path& path);

Tensor read_tensor(std::istream& in);
Tensor read_tensor(const std::filesystem::path& path);

}  // namespace rtensor
