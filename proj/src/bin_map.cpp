#include "lodestar/bin_map.hpp"

#include <map>
#include <mutex>

#include "lodestar/geometry.hpp"

namespace lodestar {

std::shared_ptr<const BinMap> get_bin_map(int width, int bins) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const BinMap>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{width, bins}];
  if (slot) return slot;

  auto map = std::make_shared<BinMap>();
  map->width = width;
  map->bins = bins;
  map->pixel_bin.resize(static_cast<std::size_t>(width) * width);
  map->bin_pixels.resize(bins);
  const double c = (width - 1) / 2.0;
  for (int row = 0; row < width; ++row) {
    for (int col = 0; col < width; ++col) {
      const int bin = azimuth_bin_of(c - row, col - c, bins);
      const std::int32_t idx = static_cast<std::int32_t>(row) * width + col;
      map->pixel_bin[idx] = bin;
      map->bin_pixels[bin].push_back(idx);
    }
  }
  slot = map;
  return slot;
}

}  // namespace lodestar
