#include "randtensor/tensor_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <vector>

namespace rtensor {

namespace {

constexpr std::array<char, 4> kMagic{'R', 'T', 'B', '1'};

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) buf.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return v;
}

using Kind = TensorFileError::Kind;

}  // namespace

void write_tensor(const Tensor& t, std::ostream& out) {
  const auto& dims = t.shape().dims();
  if (dims.size() > std::numeric_limits<std::uint8_t>::max()) {
    throw TensorFileError(Kind::MalformedHeader, "tensor order does not fit the RTB1 header");
  }
  std::vector<unsigned char> buf;
  buf.reserve(5 + 4 * dims.size() + 8 * t.size());
  buf.insert(buf.end(), kMagic.begin(), kMagic.end());
  buf.push_back(static_cast<unsigned char>(dims.size()));
  for (std::size_t n : dims) {
    if (n > std::numeric_limits<std::uint32_t>::max()) {
      throw TensorFileError(Kind::MalformedHeader, "dimension does not fit u32");
    }
    put_u32(buf, static_cast<std::uint32_t>(n));
  }
  for (double x : t.data()) put_u64(buf, std::bit_cast<std::uint64_t>(x));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) {
    throw TensorFileError(Kind::Io, "failed writing tensor stream");
  }
}

void write_tensor(const Tensor& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw TensorFileError(Kind::Io, "cannot open '" + path.string() + "' for writing");
  }
  write_tensor(t, out);
}

Tensor read_tensor(std::istream& in) {
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 5 || std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0) {
    throw TensorFileError(Kind::MalformedHeader, "missing RTB1 magic");
  }
  const std::size_t order = buf[4];
  if (order < 2) {
    throw TensorFileError(Kind::MalformedHeader, "RTB1 order must be at least 2");
  }
  const std::size_t header = 5 + 4 * order;
  if (buf.size() < header) {
    throw TensorFileError(Kind::MalformedHeader, "truncated RTB1 dimension table");
  }
  std::vector<std::size_t> dims(order);
  for (std::size_t j = 0; j < order; ++j) dims[j] = get_u32(buf.data() + 5 + 4 * j);

  std::optional<Shape> shape;
  try {
    shape.emplace(dims);
  } catch (const ShapeError& e) {
    throw TensorFileError(Kind::MalformedHeader, std::string("invalid RTB1 dims: ") + e.what());
  }

  const std::size_t payload = buf.size() - header;
  if (payload % 8 != 0 || payload / 8 != shape->size()) {
    throw TensorFileError(Kind::LengthMismatch, "RTB1 payload holds " + std::to_string(payload) +
                                                    " bytes, header declares " + std::to_string(shape->size()) +
                                                    " doubles");
  }
  std::vector<double> data(shape->size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<double>(get_u64(buf.data() + header + 8 * i));
    if (!std::isfinite(data[i])) {
      throw TensorFileError(Kind::NonFinite, "non-finite entry at offset " + std::to_string(i));
    }
  }
  return Tensor(std::move(*shape), std::move(data));
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw TensorFileError(Kind::Io, "cannot open '" + path.string() + "'");
  }
  return read_tensor(in);
}

}  // namespace rtensor
