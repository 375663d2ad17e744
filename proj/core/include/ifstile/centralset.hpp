#pragma once

// Raster estimation of the central open set C = {x : d(x,A) < d(x,H)}, its
// boundary contour, and feasibility diagnostics at raster tolerance.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifstile/attractor.hpp"
#include "ifstile/geometry.hpp"
#include "ifstile/tiling.hpp"

namespace ifstile {

struct CentralSetParams {
  int resolution = 1024;       // pixels across the window's x extent
  int neighbor_depth = 4;
  std::size_t cloud_size = 200000;
  std::uint64_t seed = 0xce17a15e7ULL;
  /// Defaults to the attractor bounding box inflated by a quarter diameter.
  std::optional<Box> window;
  /// Fast-basin points farther than prune_factor * window diameter from the
  /// attractor box cannot matter and are dropped.
  double prune_factor = 2.0;
  std::size_t basin_max_points = 4000000;
};

struct CentralSetEstimate {
  RasterField mask;    // binary: 1 where margin > tie tolerance
  RasterField dist_a;  // d(center, A~)
  RasterField dist_h;  // d(center, H~)
  RasterField margin;  // dist_h - dist_a
  int neighbor_depth = 0;
  int resolution = 0;
  std::uint64_t seed = 0;
  /// No on-pixels: evidence that the OSC fails.
  bool osc_evidence = false;
  /// Mask reaches the window edge; C may continue past the window.
  bool unbounded_suspected = false;

  std::size_t on_pixels() const { return mask.count_where(0.5); }
  double area() const {
    return static_cast<double>(on_pixels()) * mask.pixel_w() * mask.pixel_h();
  }
};

/// Pixels with |margin| below this are treated as boundary, never interior.
inline constexpr double kTieTol = 1e-12;

/// Chaos-game attractor cloud, neighbor-map fast-basin slice, two exact
/// distance fields, pixelwise comparison. 1-d systems run on a 3-row strip
/// around the y = 0 line (square pixels); row 1 is the 1-d answer.
CentralSetEstimate estimate_central_set(const IfsSpec& spec,
                                        const CentralSetParams& params = {});

struct FeasibilityReport {
  bool osc_evidence = false;  // mask non-empty
  /// Per-map: fraction of mask pixels whose image lands outside the
  /// band-dilated mask.
  std::vector<double> containment_violation;
  /// Per unordered pair (i < j), pixels in both band-eroded images.
  struct PairOverlap {
    int i = 0, j = 0;
    std::size_t pixels = 0;
  };
  std::vector<PairOverlap> overlaps;
  int band_px = 2;
  bool pass = false;  // all violations confined to the band
};

/// F(C~) subset of C~ and disjoint images, checked up to a `band_px` pixel
/// band: containment is tested against the dilated mask, overlap on the
/// eroded images.
FeasibilityReport feasibility_check(const IfsSpec& spec,
                                    const CentralSetEstimate& c,
                                    int band_px = 2);

struct BoundaryCurve {
  std::vector<std::vector<std::array<double, 2>>> polylines;

  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& p : polylines) n += p.size();
    return n;
  }
};

/// Marching-squares contour of the zero level of an arbitrary scalar field
/// with linear interpolation along pixel edges; segments chained into
/// polylines. A field of constant sign yields no curves.
BoundaryCurve contour_zero(const RasterField& field);

/// contour_zero(c.margin); throws when the mask is empty.
BoundaryCurve extract_boundary(const CentralSetEstimate& c);

/// Largest-inscribed-circle samples along the boundary: every `stride`-th
/// contour point paired with its distance to the attractor cloud sample,
/// as (x, y, radius).
std::vector<std::array<double, 3>> touching_circles(const CentralSetEstimate& c,
                                                    const BoundaryCurve& b,
                                                    std::size_t stride = 16);

/// The mask as a raster-stencil tile shape (the window is the coordinate
/// frame), i.e. T = closure of the estimated C.
TileShape tile_shape_from_mask(const CentralSetEstimate& c);

/// x,y per line, blank line between polylines.
void write_csv(const BoundaryCurve& b, const std::string& path);
/// Single-path-per-polyline SVG in data coordinates (y flipped for display).
void write_svg(const BoundaryCurve& b, const Box& viewport,
               const std::string& path);

}  // namespace ifstile
