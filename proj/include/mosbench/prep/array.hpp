#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace mosbench::prep {

/// Dense H×W×C array, channel-interleaved (HWC) in memory.
template <typename T>
class Array3 {
 public:
  Array3() = default;
  Array3(std::size_t h, std::size_t w, std::size_t c, T fill = T{})
      : h_(h), w_(w), c_(c), data_(h * w * c, fill) {}

  std::size_t height() const noexcept { return h_; }
  std::size_t width() const noexcept { return w_; }
  std::size_t channels() const noexcept { return c_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t y, std::size_t x, std::size_t k) noexcept { return data_[(y * w_ + x) * c_ + k]; }
  const T& operator()(std::size_t y, std::size_t x, std::size_t k) const noexcept {
    return data_[(y * w_ + x) * c_ + k];
  }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Array3&, const Array3&) = default;

 private:
  std::size_t h_ = 0, w_ = 0, c_ = 0;
  std::vector<T> data_;
};

using Frame = Array3<std::uint8_t>;

// Raw planar file: "MBRA" magic, then little-endian u32 version, dtype (1 = u8,
// 2 = f32), frames, height, width, channels; then for each frame its channel
// planes in order, each height×width row-major.
void write_planar(const std::filesystem::path& path, const std::vector<Array3<std::uint8_t>>& frames);
void write_planar(const std::filesystem::path& path, const std::vector<Array3<float>>& frames);

/// Throws SchemaError on a bad header or a dtype other than the requested one.
std::vector<Array3<std::uint8_t>> read_planar_u8(const std::filesystem::path& path);
std::vector<Array3<float>> read_planar_f32(const std::filesystem::path& path);

}  // namespace mosbench::prep
