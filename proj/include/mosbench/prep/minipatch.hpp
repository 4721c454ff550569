#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mosbench/prep/array.hpp"

namespace mosbench::prep {

struct FrameGridSpec {
  int grid = 7;    // L, cells per side
  int patch = 32;  // P, patch side in pixels
  std::uint64_t seed = 0;
};

/// Grid cell (i, j) covers rows [floor(iH/L), floor((i+1)H/L)) and the same for columns.
struct CellBounds {
  std::size_t y0, y1, x0, x1;
};
CellBounds cell_bounds(std::size_t height, std::size_t width, int grid, int i, int j);

/// Top-left corner of the patch taken from each cell, row-major over cells.
struct PatchOffset {
  std::size_t y, x;
  friend bool operator==(const PatchOffset&, const PatchOffset&) = default;
};

/// One uniform draw per cell. Throws InfeasibleError when L < 1, P < 1 or L·P > min(H, W).
std::vector<PatchOffset> sample_offsets(std::size_t height, std::size_t width, const FrameGridSpec& spec);

/// Splices the P×P patch of every cell into an (L·P)×(L·P)×C map. Offsets are drawn
/// once and reused for every frame. All frames must share a shape (InputError otherwise).
std::vector<Frame> grid_minipatch(const std::vector<Frame>& frames, const FrameGridSpec& spec);

/// Space-to-depth: out[i, j, C·(r·di + dj) + k] = in[r·i + di, r·j + dj, k].
/// Throws DomainError unless r >= 1 divides both spatial sides.
template <typename T>
Array3<T> pixel_unshuffle(const Array3<T>& in, int r);

/// Exact inverse of pixel_unshuffle. Throws DomainError unless r² divides the channel count.
template <typename T>
Array3<T> pixel_shuffle(const Array3<T>& in, int r);

}  // namespace mosbench::prep
