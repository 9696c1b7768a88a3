#include "lodestar/features.hpp"

#include <algorithm>
#include <cmath>

#include "lodestar/bin_map.hpp"
#include "lodestar/common.hpp"
#include "lodestar/kernels.hpp"

namespace lodestar {

ContourMask extract_contour(const RadarFrame& frame, FilterKind filter_kind,
                            double grad_threshold) {
  if (!(grad_threshold > 0.0)) throw data_error("grad_threshold must be > 0");
  const int w = frame.width, h = frame.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  std::vector<float> contrast(n), mean(n);
  kernels::local_contrast(frame.image.data(), w, h, contrast.data());
  kernels::box_mean3(frame.image.data(), w, h, mean.data());

  ContourMask out;
  out.width = w;
  out.height = h;
  out.filter_kind = filter_kind;
  out.mask.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (contrast[i] <= grad_threshold) continue;
    const bool side = filter_kind == FilterKind::high_pass ? frame.image[i] >= mean[i]
                                                           : frame.image[i] <= mean[i];
    out.mask[i] = side ? 1 : 0;
  }
  return out;
}

namespace {

struct Candidate {
  float dist2;  // squared pixel distance from center
  std::int32_t pixel;
};

FeatureCloud selected_to_cloud(const RadarFrame& frame, const std::vector<std::int32_t>& pixels,
                               int bins, Provenance provenance) {
  FeatureCloud fc;
  fc.source_frame_id = frame.frame_id;
  fc.cloud.bins = bins;
  fc.cloud.points.reserve(pixels.size());
  fc.provenance.assign(pixels.size(), provenance);
  const auto map = get_bin_map(frame.width, bins);
  for (std::int32_t px : pixels) {
    const int row = px / frame.width;
    const int col = px % frame.width;
    Point2 p;
    pixel_to_point(frame, row, col, p.x, p.y);
    p.intensity = frame.image[px];
    p.azimuth_bin = map->pixel_bin[px];
    fc.cloud.points.push_back(p);
  }
  return fc;
}

}  // namespace

FeatureCloud select_k_nearest(const RadarFrame& frame, const ContourMask& contour, int k,
                              int bins) {
  if (k < 1) throw data_error("k must be >= 1");
  if (contour.width != frame.width || contour.height != frame.height)
    throw data_error("contour mask not congruent with frame");

  const auto map = get_bin_map(frame.width, bins);
  const double c = frame.center();

  std::vector<std::int32_t> selected;
  std::vector<Candidate> bin_candidates;
  for (int bin = 0; bin < bins; ++bin) {
    bin_candidates.clear();
    for (std::int32_t px : map->bin_pixels[bin]) {
      if (!contour.mask[px]) continue;
      const int row = px / frame.width;
      const int col = px % frame.width;
      const double dr = row - c, dc = col - c;
      bin_candidates.push_back({static_cast<float>(dr * dr + dc * dc), px});
    }
    const std::size_t take = std::min<std::size_t>(k, bin_candidates.size());
    std::partial_sort(bin_candidates.begin(), bin_candidates.begin() + take, bin_candidates.end(),
                      [](const Candidate& a, const Candidate& b) {
                        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
                        return a.pixel < b.pixel;
                      });
    for (std::size_t i = 0; i < take; ++i) selected.push_back(bin_candidates[i].pixel);
  }
  return selected_to_cloud(frame, selected, bins, Provenance::k_nearest);
}

FeatureCloud select_k_strongest(const RadarFrame& frame, double intensity_threshold, int k,
                                int bins) {
  if (k < 1) throw data_error("k must be >= 1");
  const auto map = get_bin_map(frame.width, bins);
  const double c = frame.center();

  struct StrongCandidate {
    float intensity;
    float dist2;
    std::int32_t pixel;
  };
  std::vector<std::int32_t> selected;
  std::vector<StrongCandidate> bin_candidates;
  for (int bin = 0; bin < bins; ++bin) {
    bin_candidates.clear();
    for (std::int32_t px : map->bin_pixels[bin]) {
      const float v = frame.image[px];
      if (v < intensity_threshold) continue;
      const int row = px / frame.width;
      const int col = px % frame.width;
      const double dr = row - c, dc = col - c;
      bin_candidates.push_back({v, static_cast<float>(dr * dr + dc * dc), px});
    }
    const std::size_t take = std::min<std::size_t>(k, bin_candidates.size());
    std::partial_sort(bin_candidates.begin(), bin_candidates.begin() + take, bin_candidates.end(),
                      [](const StrongCandidate& a, const StrongCandidate& b) {
                        if (a.intensity != b.intensity) return a.intensity > b.intensity;
                        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
                        return a.pixel < b.pixel;
                      });
    for (std::size_t i = 0; i < take; ++i) selected.push_back(bin_candidates[i].pixel);
  }
  return selected_to_cloud(frame, selected, bins, Provenance::k_strongest);
}

namespace {

OverlapReport report_from_stale(const std::vector<std::uint8_t>& stale, int bins) {
  OverlapReport report;
  report.bins = bins;
  int count = 0;
  for (int b = 0; b < bins; ++b) {
    if (!stale[b]) continue;
    ++count;
    if (!report.stale_sectors.empty() && report.stale_sectors.back().end == b) {
      report.stale_sectors.back().end = b + 1;
    } else {
      report.stale_sectors.push_back({b, b + 1});
    }
  }
  report.dropped_fraction = bins > 0 ? static_cast<double>(count) / bins : 0.0;
  return report;
}

}  // namespace

OverlapReport eliminate_overlap(const RadarFrame& prev, const RadarFrame& curr,
                                double change_threshold, int bins) {
  if (prev.width != curr.width || prev.height != curr.height)
    throw data_error("eliminate_overlap: frames not congruent");
  if (change_threshold < 0.0 || change_threshold > 1.0)
    throw data_error("change_threshold outside [0,1]");

  const std::size_t n = static_cast<std::size_t>(prev.width) * prev.height;
  std::vector<float> diff(n);
  kernels::abs_diff(prev.image.data(), curr.image.data(), n, diff.data());

  const auto map = get_bin_map(prev.width, bins);
  std::vector<std::uint8_t> stale(bins, 0);
  for (int bin = 0; bin < bins; ++bin) {
    const auto& pixels = map->bin_pixels[bin];
    if (pixels.empty()) {
      stale[bin] = 1;
      continue;
    }
    double sum = 0.0;
    for (std::int32_t px : pixels) sum += diff[px];
    stale[bin] = (sum / pixels.size()) < change_threshold ? 1 : 0;
  }
  return report_from_stale(stale, bins);
}

OverlapReport eliminate_overlap_timestamps(const RadarFrame& prev, const RadarFrame& curr,
                                           int bins) {
  if (prev.sectors.empty() || curr.sectors.empty())
    throw data_error("eliminate_overlap_timestamps: frames carry no sector stamps");

  auto scan_time_at = [](const RadarFrame& f, double angle) {
    for (const SectorStamp& s : f.sectors) {
      if (s.az_start <= s.az_end) {
        if (angle >= s.az_start && angle < s.az_end) return s.scan_time;
      } else {  // wraps through 0
        if (angle >= s.az_start || angle < s.az_end) return s.scan_time;
      }
    }
    return f.sectors.back().scan_time;
  };

  const double w = kTwoPi / bins;
  std::vector<std::uint8_t> stale(bins, 0);
  for (int bin = 0; bin < bins; ++bin) {
    const double angle = std::fmod(bin * w, kTwoPi);
    stale[bin] = scan_time_at(prev, angle) == scan_time_at(curr, angle) ? 1 : 0;
  }
  return report_from_stale(stale, bins);
}

FeatureCloud apply_overlap_dropout(const FeatureCloud& cloud, const OverlapReport& report) {
  FeatureCloud out;
  out.source_frame_id = cloud.source_frame_id;
  out.cloud.bins = cloud.cloud.bins;
  for (std::size_t i = 0; i < cloud.cloud.points.size(); ++i) {
    if (report.is_stale(cloud.cloud.points[i].azimuth_bin)) continue;
    out.cloud.points.push_back(cloud.cloud.points[i]);
    out.provenance.push_back(cloud.provenance[i]);
  }
  return out;
}

}  // namespace lodestar
