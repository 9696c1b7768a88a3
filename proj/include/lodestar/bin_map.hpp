#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace lodestar {

/// Partition of a square image into azimuth-bin corridors: every pixel
/// belongs to the bin its azimuth (about the image center) rounds to.
struct BinMap {
  int width = 0;
  int bins = 0;
  std::vector<std::int32_t> pixel_bin;              // width * width, row-major
  std::vector<std::vector<std::int32_t>> bin_pixels;  // flat pixel indices per bin

  int bin_at(int row, int col) const { return pixel_bin[static_cast<std::size_t>(row) * width + col]; }
};

/// Shared, cached bin maps (building one costs a full-image atan2 pass).
std::shared_ptr<const BinMap> get_bin_map(int width, int bins);

}  // namespace lodestar
