#include "mosbench/prep/array.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "mosbench/core/errors.hpp"
#include "mosbench/store/atomic_file.hpp"

namespace mosbench::prep {
namespace {

constexpr char kMagic[4] = {'M', 'B', 'R', 'A'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 6 * 4;

template <typename T>
constexpr std::uint32_t dtype_code();
template <>
constexpr std::uint32_t dtype_code<std::uint8_t>() {
  return 1;
}
template <>
constexpr std::uint32_t dtype_code<float>() {
  return 2;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

void put_value(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }
void put_value(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

void get_value(const std::string& in, std::size_t at, std::uint8_t& v) { v = static_cast<std::uint8_t>(in[at]); }
void get_value(const std::string& in, std::size_t at, float& v) { v = std::bit_cast<float>(get_u32(in, at)); }

template <typename T>
void write_impl(const std::filesystem::path& path, const std::vector<Array3<T>>& frames) {
  const std::size_t h = frames.empty() ? 0 : frames.front().height();
  const std::size_t w = frames.empty() ? 0 : frames.front().width();
  const std::size_t c = frames.empty() ? 0 : frames.front().channels();
  for (const auto& f : frames) {
    if (f.height() != h || f.width() != w || f.channels() != c) {
      throw InputError("write_planar: frames differ in shape");
    }
  }
  std::string out(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, dtype_code<T>());
  put_u32(out, static_cast<std::uint32_t>(frames.size()));
  put_u32(out, static_cast<std::uint32_t>(h));
  put_u32(out, static_cast<std::uint32_t>(w));
  put_u32(out, static_cast<std::uint32_t>(c));
  out.reserve(out.size() + frames.size() * h * w * c * sizeof(T));
  for (const auto& f : frames) {
    for (std::size_t k = 0; k < c; ++k) {
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) put_value(out, f(y, x, k));
      }
    }
  }
  store::write_file_atomic(path, out);
}

template <typename T>
std::vector<Array3<T>> read_impl(const std::filesystem::path& path) {
  const std::string in = store::read_file(path);
  const std::string source = path.string();
  if (in.size() < kHeaderSize || std::memcmp(in.data(), kMagic, 4) != 0) {
    throw SchemaError(source + ": not a planar array file");
  }
  if (get_u32(in, 4) != kVersion) {
    throw SchemaError(source + ": unsupported version " + std::to_string(get_u32(in, 4)));
  }
  if (get_u32(in, 8) != dtype_code<T>()) {
    throw SchemaError(source + ": dtype code " + std::to_string(get_u32(in, 8)) + ", expected " +
                      std::to_string(dtype_code<T>()));
  }
  const std::size_t n = get_u32(in, 12), h = get_u32(in, 16), w = get_u32(in, 20), c = get_u32(in, 24);
  if (in.size() != kHeaderSize + n * h * w * c * sizeof(T)) {
    throw SchemaError(source + ": payload size does not match header");
  }
  std::vector<Array3<T>> frames;
  frames.reserve(n);
  std::size_t at = kHeaderSize;
  for (std::size_t i = 0; i < n; ++i) {
    Array3<T> f(h, w, c);
    for (std::size_t k = 0; k < c; ++k) {
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x, at += sizeof(T)) get_value(in, at, f(y, x, k));
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace

void write_planar(const std::filesystem::path& path, const std::vector<Array3<std::uint8_t>>& frames) {
  write_impl(path, frames);
}
void write_planar(const std::filesystem::path& path, const std::vector<Array3<float>>& frames) {
  write_impl(path, frames);
}
std::vector<Array3<std::uint8_t>> read_planar_u8(const std::filesystem::path& path) {
  return read_impl<std::uint8_t>(path);
}
std::vector<Array3<float>> read_planar_f32(const std::filesystem::path& path) {
  return read_impl<float>(path);
}

}  // namespace mosbench::prep
