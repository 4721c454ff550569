#include "mosbench/prep/minipatch.hpp"

#include <algorithm>
#include <string>

#include "mosbench/core/errors.hpp"
#include "mosbench/core/random.hpp"

namespace mosbench::prep {

CellBounds cell_bounds(std::size_t height, std::size_t width, int grid, int i, int j) {
  const auto L = static_cast<std::size_t>(grid);
  const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
  return {ui * height / L, (ui + 1) * height / L, uj * width / L, (uj + 1) * width / L};
}

std::vector<PatchOffset> sample_offsets(std::size_t height, std::size_t width, const FrameGridSpec& spec) {
  if (spec.grid < 1 || spec.patch < 1) {
    throw InfeasibleError("grid_minipatch: grid and patch must be positive");
  }
  const auto span = static_cast<std::size_t>(spec.grid) * static_cast<std::size_t>(spec.patch);
  if (span > std::min(height, width)) {
    throw InfeasibleError("grid_minipatch: " + std::to_string(spec.grid) + "x" + std::to_string(spec.patch) +
                          " pixels do not fit a " + std::to_string(height) + "x" + std::to_string(width) +
                          " frame");
  }
  const auto P = static_cast<std::size_t>(spec.patch);
  Rng rng(spec.seed);
  std::vector<PatchOffset> out;
  out.reserve(static_cast<std::size_t>(spec.grid * spec.grid));
  for (int i = 0; i < spec.grid; ++i) {
    for (int j = 0; j < spec.grid; ++j) {
      const auto b = cell_bounds(height, width, spec.grid, i, j);
      const std::size_t dy = rng.below(b.y1 - b.y0 - P + 1);
      const std::size_t dx = rng.below(b.x1 - b.x0 - P + 1);
      out.push_back({b.y0 + dy, b.x0 + dx});
    }
  }
  return out;
}

std::vector<Frame> grid_minipatch(const std::vector<Frame>& frames, const FrameGridSpec& spec) {
  if (frames.empty()) return {};
  const std::size_t h = frames.front().height(), w = frames.front().width(), c = frames.front().channels();
  for (const auto& f : frames) {
    if (f.height() != h || f.width() != w || f.channels() != c) {
      throw InputError("grid_minipatch: frames differ in shape");
    }
  }
  const auto offsets = sample_offsets(h, w, spec);
  const auto L = static_cast<std::size_t>(spec.grid), P = static_cast<std::size_t>(spec.patch);

  std::vector<Frame> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    Frame m(L * P, L * P, c);
    for (std::size_t cell = 0; cell < offsets.size(); ++cell) {
      const std::size_t oy = (cell / L) * P, ox = (cell % L) * P;
      for (std::size_t y = 0; y < P; ++y) {
        const auto* src = &f(offsets[cell].y + y, offsets[cell].x, 0);
        std::copy(src, src + P * c, &m(oy + y, ox, 0));
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

template <typename T>
Array3<T> pixel_unshuffle(const Array3<T>& in, int r) {
  if (r < 1) throw DomainError("pixel_unshuffle: factor must be positive");
  const auto R = static_cast<std::size_t>(r);
  if (in.height() % R || in.width() % R) {
    throw DomainError("pixel_unshuffle: " + std::to_string(in.height()) + "x" + std::to_string(in.width()) +
                      " is not divisible by " + std::to_string(r));
  }
  const std::size_t C = in.channels();
  Array3<T> out(in.height() / R, in.width() / R, C * R * R);
  for (std::size_t i = 0; i < out.height(); ++i) {
    for (std::size_t j = 0; j < out.width(); ++j) {
      for (std::size_t di = 0; di < R; ++di) {
        for (std::size_t dj = 0; dj < R; ++dj) {
          for (std::size_t k = 0; k < C; ++k) out(i, j, C * (R * di + dj) + k) = in(R * i + di, R * j + dj, k);
        }
      }
    }
  }
  return out;
}

template <typename T>
Array3<T> pixel_shuffle(const Array3<T>& in, int r) {
  if (r < 1) throw DomainError("pixel_shuffle: factor must be positive");
  const auto R = static_cast<std::size_t>(r);
  if (in.channels() % (R * R)) {
    throw DomainError("pixel_shuffle: " + std::to_string(in.channels()) + " channels not divisible by " +
                      std::to_string(R * R));
  }
  const std::size_t C = in.channels() / (R * R);
  Array3<T> out(in.height() * R, in.width() * R, C);
  for (std::size_t i = 0; i < in.height(); ++i) {
    for (std::size_t j = 0; j < in.width(); ++j) {
      for (std::size_t di = 0; di < R; ++di) {
        for (std::size_t dj = 0; dj < R; ++dj) {
          for (std::size_t k = 0; k < C; ++k) out(R * i + di, R * j + dj, k) = in(i, j, C * (R * di + dj) + k);
        }
      }
    }
  }
  return out;
}

template Array3<std::uint8_t> pixel_unshuffle(const Array3<std::uint8_t>&, int);
template Array3<float> pixel_unshuffle(const Array3<float>&, int);
template Array3<double> pixel_unshuffle(const Array3<double>&, int);
template Array3<std::uint8_t> pixel_shuffle(const Array3<std::uint8_t>&, int);
template Array3<float> pixel_shuffle(const Array3<float>&, int);
template Array3<double> pixel_shuffle(const Array3<double>&, int);

}  // namespace mosbench::prep
