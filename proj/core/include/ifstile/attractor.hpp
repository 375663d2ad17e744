#pragma once

// Attractor approximation: chaos-game point clouds, deterministic raster
// masks, Moran dimension, and exact Euclidean distance fields.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ifstile/geometry.hpp"

namespace ifstile {

/// Axis-aligned box; dimension follows lo.size().
struct Box {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double extent(int axis) const { return hi[axis] - lo[axis]; }
  double diameter() const;
  Vec center() const;
  Box inflated(double margin) const;
  bool contains(const Vec& x) const;
  bool intersects(const Box& other) const;
  /// Euclidean distance from x to the box (0 inside).
  double distance(const Vec& x) const;
  static Box hull(const Box& a, const Box& b);
};

struct PointCloud {
  int dim = 0;
  std::vector<double> coords;  // interleaved, size = dim * count
  // provenance
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;

  std::size_t size() const { return dim ? coords.size() / dim : 0; }
  bool empty() const { return coords.empty(); }
  const double* point(std::size_t i) const { return coords.data() + i * dim; }
  Vec at(std::size_t i) const;
  void push(const double* p);
};

Box bounding_box(const PointCloud& cloud);

/// Scalar samples over a window, pixel-center convention: sample (ix, iy)
/// sits at lo + ((ix + 0.5) * dx, (iy + 0.5) * dy). Row 0 is the y-min row.
struct RasterField {
  Box window;  // 2-d
  int width = 0, height = 0;
  std::vector<double> samples;

  static RasterField zeros(const Box& window, int width, int height);
  double pixel_w() const { return window.extent(0) / width; }
  double pixel_h() const { return window.extent(1) / height; }
  double& at(int ix, int iy) { return samples[static_cast<std::size_t>(iy) * width + ix]; }
  double at(int ix, int iy) const { return samples[static_cast<std::size_t>(iy) * width + ix]; }
  Vec center(int ix, int iy) const;
  /// Nearest-pixel sample; returns `outside` beyond the window.
  double sample(double x, double y, double outside = 0.0) const;
  std::size_t count_where(double threshold) const;  // samples > threshold
};

/// Random-iteration orbit x_{k+1} = f_u(x_k) with u uniform over the
/// alphabet; the first `burn_in` iterates are discarded. Deterministic for a
/// given seed, independent of platform.
PointCloud chaos_game(const IfsSpec& spec, std::size_t count,
                      std::size_t burn_in, std::uint64_t seed);

/// Deterministic alternative: pixel on iff its center lies within the
/// half-diagonal of some depth-k image of the seed box (= window).
RasterField attractor_mask(const IfsSpec& spec, const Box& window, int width,
                           int height, int depth);

/// Unique positive D with sum_i lambda_i^D = 1, residual below 1e-12.
double moran_dimension(const std::vector<double>& ratios);

/// Uniform-grid spatial index over a point cloud; nearest queries are exact
/// (expanding ring search with a conservative stopping bound).
class PointGrid {
 public:
  explicit PointGrid(const PointCloud& cloud);
  /// Exact distance from (x, y) — or (x) in 1-d — to the nearest point.
  double nearest_distance(const double* q) const;
  std::size_t size() const { return count_; }

 private:
  int dim_;
  std::size_t count_;
  Box bounds_;
  int nx_ = 1, ny_ = 1;
  double cell_ = 1.0;
  std::vector<double> pts_;           // reordered, interleaved
  std::vector<std::uint32_t> start_;  // CSR offsets per cell
};

/// Exact Euclidean distance from every pixel center to the nearest cloud
/// point. The cloud must be non-empty. 1-d clouds are treated as lying on
/// the y = 0 line of the 2-d window.
RasterField distance_field(const PointCloud& cloud, const Box& window,
                           int width, int height);

// --- exports ---

/// One point per line, full double precision, comma separated.
void write_csv(const PointCloud& cloud, std::ostream& out);
void write_csv(const PointCloud& cloud, const std::string& path);

/// PGM (P2 when binary=false, P5 otherwise). Masks map {0,1} to {0,255};
/// other fields are quantized to 16-bit over [0, max]. A sidecar JSON header
/// `path + ".json"` records the exact window and scaling.
void write_pgm(const RasterField& field, const std::string& path,
               bool binary = true, bool is_mask = false);

}  // namespace ifstile
