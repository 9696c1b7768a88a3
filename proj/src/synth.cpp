#include "lodestar/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "lodestar/bin_map.hpp"
#include "lodestar/common.hpp"

namespace lodestar::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(seed ^ splitmix64(a ^ splitmix64(b)));
}

std::uint64_t time_bits(double t) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(t));
  std::memcpy(&bits, &t, sizeof(bits));
  return bits;
}

/// Deterministic noise stream; distributions are pinned here rather than
/// delegated to the (implementation-defined) std distributions.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gauss() {
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

struct Edge {
  double x1, y1, x2, y2;
  double rcs;
};

/// Flattened edge soup for ray casting.
std::vector<Edge> collect_edges(const Scene& scene) {
  std::vector<Edge> edges;
  for (const CoastPolygon& poly : scene.coast_polygons) {
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = poly.vertices[i];
      const auto& b = poly.vertices[(i + 1) % n];
      edges.push_back({a.first, a.second, b.first, b.second, poly.rcs});
    }
  }
  return edges;
}

double quantize_rcs(const Scene& scene, double rcs) {
  double best = scene.rcs_levels.front();
  double best_d = std::abs(rcs - best);
  for (double level : scene.rcs_levels) {
    const double d = std::abs(rcs - level);
    if (d < best_d) {
      best = level;
      best_d = d;
    }
  }
  return best;
}

/// First hit along the ray from (ox, oy) in unit direction (dx, dy).
/// Returns range and rcs, or a negative range when nothing is hit.
std::pair<double, double> cast_ray(const std::vector<Edge>& edges, double ox, double oy, double dx,
                                   double dy, double r_max) {
  double best_s = std::numeric_limits<double>::infinity();
  double best_rcs = 0.0;
  for (const Edge& e : edges) {
    const double ex = e.x2 - e.x1;
    const double ey = e.y2 - e.y1;
    const double denom = dx * ey - dy * ex;
    if (std::abs(denom) < 1e-12) continue;  // parallel (or degenerate edge)
    const double wx = e.x1 - ox;
    const double wy = e.y1 - oy;
    const double s = (wx * ey - wy * ex) / denom;
    const double u = (wx * dy - wy * dx) / denom;
    if (s > 1e-9 && s < best_s && u >= 0.0 && u <= 1.0) {
      best_s = s;
      best_rcs = e.rcs;
    }
  }
  if (best_s > r_max) return {-1.0, 0.0};
  return {best_s, best_rcs};
}

bool pose_in_bounds(const Scene& scene, const Pose2& pose) {
  if (scene.coast_polygons.empty()) return true;
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = max_x;
  for (const CoastPolygon& poly : scene.coast_polygons) {
    for (const auto& [x, y] : poly.vertices) {
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  return pose.x >= min_x && pose.x <= max_x && pose.y >= min_y && pose.y <= max_y;
}

/// Re-render the listed ray bins into `frame`. Each bin is cast at its own
/// pose and stamped with its own scan time; pixels in the bin's corridor are
/// cleared, the first polygon hit is painted, then per-pixel speckle and
/// false alarms are applied from a stream seeded by (scene seed, bin, scan
/// time).
template <typename PoseFn, typename TimeFn>
void render_bins(const Scene& scene, const std::vector<Edge>& edges, const FrameSpec& spec,
                 int rays, RadarFrame& frame, const std::vector<int>& bins, PoseFn pose_of,
                 TimeFn time_of) {
  const auto map = get_bin_map(spec.width, rays);
  const double c = frame.center();
  const double r_max = frame.r_max;
  const double bin_w = kTwoPi / rays;
  const double max_level = scene.rcs_levels.back();

  for (int bin : bins) {
    const Pose2 pose = pose_of(bin);
    if (!pose_in_bounds(scene, pose))
      throw data_error("vessel pose outside scene bounds at t=" + std::to_string(time_of(bin)));

    for (std::int32_t px : map->bin_pixels[bin]) frame.image[px] = 0.0f;

    const double theta = bin * bin_w;
    // Body direction d(theta) = (sin, cos); world direction via the pose.
    const double bx = std::sin(theta), by = std::cos(theta);
    const double ct = std::cos(pose.theta), st = std::sin(pose.theta);
    const double dx = ct * bx - st * by;
    const double dy = st * bx + ct * by;
    const auto [range, rcs] = cast_ray(edges, pose.x, pose.y, dx, dy, r_max);
    if (range > 0.0) {
      const int row = static_cast<int>(std::lround(c - range * bx / spec.resolution));
      const int col = static_cast<int>(std::lround(c + range * by / spec.resolution));
      if (row >= 0 && row < frame.height && col >= 0 && col < frame.width)
        frame.at(row, col) = static_cast<float>(quantize_rcs(scene, rcs));
    }

    if (scene.speckle_sigma > 0.0 || scene.false_alarm_rate > 0.0) {
      NoiseStream noise(mix_seed(scene.seed, static_cast<std::uint64_t>(bin),
                                 time_bits(time_of(bin))));
      for (std::int32_t px : map->bin_pixels[bin]) {
        float v = frame.image[px];
        if (scene.speckle_sigma > 0.0) {
          v = static_cast<float>(
              std::clamp(v + scene.speckle_sigma * noise.gauss(), 0.0, 1.0));
        }
        if (scene.false_alarm_rate > 0.0 && noise.uniform() < scene.false_alarm_rate) {
          v = static_cast<float>(max_level);
        }
        frame.image[px] = v;
      }
    }
  }
}

RadarFrame blank_frame(const FrameSpec& spec, double t, std::int64_t id) {
  RadarFrame frame;
  frame.width = spec.width;
  frame.height = spec.width;
  frame.resolution = spec.resolution;
  frame.r_max = spec.resolution * std::floor(spec.width / 2.0);
  frame.timestamp = t;
  frame.frame_id = id;
  frame.image.assign(static_cast<std::size_t>(spec.width) * spec.width, 0.0f);
  return frame;
}

std::vector<int> all_bins(int rays) {
  std::vector<int> bins(rays);
  for (int i = 0; i < rays; ++i) bins[i] = i;
  return bins;
}

}  // namespace

void validate_scene(const Scene& scene) {
  if (scene.rcs_levels.empty() || scene.rcs_levels.front() != 0.0)
    throw data_error("scene: rcs_levels must contain 0 and be sorted ascending");
  if (!std::is_sorted(scene.rcs_levels.begin(), scene.rcs_levels.end()))
    throw data_error("scene: rcs_levels must be sorted ascending");
  for (double level : scene.rcs_levels)
    if (level < 0.0 || level > 1.0) throw data_error("scene: rcs level outside [0,1]");
  if (scene.false_alarm_rate < 0.0 || scene.false_alarm_rate > 1.0)
    throw data_error("scene: false_alarm_rate outside [0,1]");
  if (scene.speckle_sigma < 0.0) throw data_error("scene: negative speckle_sigma");

  for (std::size_t pi = 0; pi < scene.coast_polygons.size(); ++pi) {
    const auto& verts = scene.coast_polygons[pi].vertices;
    if (verts.size() < 3)
      throw data_error("scene: polygon " + std::to_string(pi) + " has fewer than 3 vertices");
    const std::size_t n = verts.size();
    // Non-adjacent edge pairs must not intersect.
    auto seg = [&](std::size_t i) {
      return std::array<double, 4>{verts[i].first, verts[i].second, verts[(i + 1) % n].first,
                                   verts[(i + 1) % n].second};
    };
    auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
      return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;  // shared vertex
        const auto a = seg(i), b = seg(j);
        const double o1 = orient(a[0], a[1], a[2], a[3], b[0], b[1]);
        const double o2 = orient(a[0], a[1], a[2], a[3], b[2], b[3]);
        const double o3 = orient(b[0], b[1], b[2], b[3], a[0], a[1]);
        const double o4 = orient(b[0], b[1], b[2], b[3], a[2], a[3]);
        if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
            o4 != 0)
          throw data_error("scene: polygon " + std::to_string(pi) + " self-intersects");
      }
    }
  }
}

Scene parse_scene(std::istream& in, const std::string& origin) {
  Scene scene;
  scene.rcs_levels = {0.0, 0.5, 1.0};
  std::string line;
  int line_no = 0;
  bool in_polygon = false;
  CoastPolygon current;

  auto fail = [&](const std::string& msg) {
    throw data_error(origin + ":" + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;

    if (in_polygon) {
      if (key == "end") {
        scene.coast_polygons.push_back(current);
        current = {};
        in_polygon = false;
        continue;
      }
      double x, y;
      std::istringstream vs(line);
      if (!(vs >> x >> y)) fail("expected 'x y' vertex or 'end'");
      current.vertices.emplace_back(x, y);
      continue;
    }

    if (key == "seed") {
      if (!(ls >> scene.seed)) fail("seed expects an integer");
    } else if (key == "rcs_levels") {
      scene.rcs_levels.clear();
      double v;
      while (ls >> v) scene.rcs_levels.push_back(v);
      if (scene.rcs_levels.empty()) fail("rcs_levels expects values");
    } else if (key == "false_alarm_rate") {
      if (!(ls >> scene.false_alarm_rate)) fail("false_alarm_rate expects a number");
    } else if (key == "speckle_sigma") {
      if (!(ls >> scene.speckle_sigma)) fail("speckle_sigma expects a number");
    } else if (key == "polygon") {
      in_polygon = true;
      current = {};
      std::string attr;
      while (ls >> attr) {
        if (attr.rfind("rcs=", 0) == 0) {
          try {
            current.rcs = std::stod(attr.substr(4));
          } catch (const std::exception&) {
            fail("bad rcs value '" + attr + "'");
          }
        } else {
          fail("unknown polygon attribute '" + attr + "'");
        }
      }
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (in_polygon) fail("unterminated polygon (missing 'end')");
  validate_scene(scene);
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open scene file: " + path);
  return parse_scene(in, path);
}

Pose2 interpolate_pose(const Trajectory& trajectory, double t) {
  const auto& poses = trajectory.poses;
  if (poses.empty()) throw data_error("cannot interpolate an empty trajectory");
  if (t <= poses.front().timestamp) return poses.front().pose;
  if (t >= poses.back().timestamp) return poses.back().pose;
  std::size_t hi = 1;
  while (poses[hi].timestamp < t) ++hi;
  const TimedPose& a = poses[hi - 1];
  const TimedPose& b = poses[hi];
  const double alpha = (t - a.timestamp) / (b.timestamp - a.timestamp);
  Pose2 out;
  out.x = a.pose.x + alpha * (b.pose.x - a.pose.x);
  out.y = a.pose.y + alpha * (b.pose.y - a.pose.y);
  out.theta = wrap_angle(a.pose.theta + alpha * wrap_angle(b.pose.theta - a.pose.theta));
  return out;
}

RadarFrame render_frame(const Scene& scene, const Pose2& pose, const FrameSpec& spec,
                        const ScanSchedule& schedule, double t) {
  validate_scene(scene);
  if (schedule.rays < 8) throw data_error("schedule: rays must be >= 8");
  RadarFrame frame = blank_frame(spec, t, 0);
  const auto edges = collect_edges(scene);
  render_bins(scene, edges, spec, schedule.rays, frame, all_bins(schedule.rays),
              [&](int) { return pose; }, [&](int) { return t; });
  return frame;
}

std::vector<RadarFrame> generate_sequence(const Scene& scene, const Trajectory& trajectory,
                                          const FrameSpec& spec, const ScanSchedule& schedule) {
  validate_scene(scene);
  if (trajectory.empty()) return {};
  if (!(schedule.frame_period > 0.0) || !(schedule.sweep_period > 0.0))
    throw data_error("schedule: periods must be positive");
  if (schedule.rays < 8) throw data_error("schedule: rays must be >= 8");

  const auto edges = collect_edges(scene);
  const int rays = schedule.rays;
  const double bin_w = kTwoPi / rays;
  const double omega = kTwoPi / schedule.sweep_period;  // antenna angular rate
  const double t0 = trajectory.poses.front().timestamp;

  std::vector<RadarFrame> frames;
  frames.reserve(trajectory.size());

  if (schedule.mode == ScanMode::full_rotation) {
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      const TimedPose& tp = trajectory.poses[i];
      RadarFrame frame = blank_frame(spec, tp.timestamp, static_cast<std::int64_t>(i));
      render_bins(scene, edges, spec, rays, frame, all_bins(rays), [&](int) { return tp.pose; },
                  [&](int) { return tp.timestamp; });
      frames.push_back(std::move(frame));
    }
    return frames;
  }

  // Partial-sector mode: a persistent buffer; each publication re-renders
  // only the bins the antenna swept since the previous publication, each at
  // the pose interpolated to its sweep time.
  RadarFrame buffer = blank_frame(spec, t0, 0);
  std::vector<double> scan_time(rays, t0);

  // Antenna body azimuth at time t.
  auto antenna = [&](double t) {
    double phi = std::fmod((t - t0) * omega, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    return phi;
  };

  double t_prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const double t_pub = trajectory.poses[i].timestamp;
    // Last time the antenna crossed each bin center, looking back one
    // revolution from the publication instant.
    std::vector<int> fresh;
    std::vector<double> t_scan(rays);
    const double phi_pub = antenna(t_pub);
    for (int k = 0; k < rays; ++k) {
      double back = std::fmod(phi_pub - k * bin_w, kTwoPi);
      if (back < 0.0) back += kTwoPi;
      t_scan[k] = t_pub - back / omega;
      const bool first_frame = (i == 0);
      if (first_frame || t_scan[k] > t_prev) fresh.push_back(k);
    }
    render_bins(scene, edges, spec, rays, buffer, fresh,
                [&](int k) { return interpolate_pose(trajectory, t_scan[k]); },
                [&](int k) { return t_scan[k]; });
    for (int k : fresh) scan_time[k] = t_scan[k];

    RadarFrame frame = buffer;
    frame.timestamp = t_pub;
    frame.frame_id = static_cast<std::int64_t>(i);
    frame.sectors.resize(rays);
    for (int k = 0; k < rays; ++k) {
      double lo = std::fmod(k * bin_w - bin_w / 2.0 + kTwoPi, kTwoPi);
      double hi = std::fmod(k * bin_w + bin_w / 2.0, kTwoPi);
      frame.sectors[k] = {lo, hi, scan_time[k]};
    }
    frames.push_back(std::move(frame));
    t_prev = t_pub;
  }
  return frames;
}

}  // namespace lodestar::synth
