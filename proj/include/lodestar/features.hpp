#pragma once

#include <cstdint>
#include <vector>

#include "lodestar/frame.hpp"
#include "lodestar/geometry.hpp"

namespace lodestar {

enum class FilterKind { high_pass, low_pass };

/// Boolean contour mask congruent with its source frame.
struct ContourMask {
  std::vector<std::uint8_t> mask;  // row-major, width * height
  int width = 0;
  int height = 0;
  FilterKind filter_kind = FilterKind::high_pass;

  bool at(int row, int col) const { return mask[static_cast<std::size_t>(row) * width + col] != 0; }
};

enum class Provenance : std::uint8_t { contour, k_nearest, k_strongest };

/// Sparse feature points selected from a frame.
struct FeatureCloud {
  PointCloud2D cloud;
  std::vector<Provenance> provenance;  // one entry per point
  std::int64_t source_frame_id = 0;
};

/// Azimuth-bin intervals judged unchanged since the previous frame.
struct OverlapReport {
  struct Interval {
    int begin = 0;  // inclusive
    int end = 0;    // exclusive
  };
  std::vector<Interval> stale_sectors;  // disjoint, within [0, bins)
  double dropped_fraction = 0.0;
  int bins = 0;

  bool is_stale(int bin) const {
    for (const Interval& iv : stale_sectors)
      if (bin >= iv.begin && bin < iv.end) return true;
    return false;
  }
};

/// Mark boundary pixels: local contrast (max one-sided difference against
/// the 4-neighborhood) above grad_threshold AND on the selected side of the
/// 3x3 local mean (high-pass: >= mean, low-pass: <= mean). Interiors of
/// filled blobs have zero contrast and are excluded.
ContourMask extract_contour(const RadarFrame& frame, FilterKind filter_kind, double grad_threshold);

/// Per azimuth bin (corridor = pixels whose azimuth rounds to the bin), the
/// up-to-k contour points nearest the image center. Each pixel appears at
/// most once. Points carry the bin they were selected from.
FeatureCloud select_k_nearest(const RadarFrame& frame, const ContourMask& contour, int k, int bins);

/// Baseline selector: per azimuth bin, the up-to-k strongest pixels at or
/// above `intensity_threshold` (no contour restriction); ties broken toward
/// the center.
FeatureCloud select_k_strongest(const RadarFrame& frame, double intensity_threshold, int k,
                                int bins);

/// Image-difference staleness test: bins whose mean absolute intensity
/// change over the corridor is below change_threshold are stale.
OverlapReport eliminate_overlap(const RadarFrame& prev, const RadarFrame& curr,
                                double change_threshold, int bins);

/// Scan-time staleness test for frames carrying per-sector stamps: a bin is
/// stale when the sector covering its center angle reports the same scan
/// time in both frames.
OverlapReport eliminate_overlap_timestamps(const RadarFrame& prev, const RadarFrame& curr,
                                           int bins);

/// Remove points whose azimuth bin falls in a stale sector.
FeatureCloud apply_overlap_dropout(const FeatureCloud& cloud, const OverlapReport& report);

}  // namespace lodestar
