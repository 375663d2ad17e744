#include "ifstile/centralset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>

#include "ifstile/neighbors.hpp"

namespace ifstile {

namespace {

Box lift_window_1d(const Box& xrange, int resolution) {
  const double pw = xrange.extent(0) / resolution;
  return Box{{xrange.lo[0], -1.5 * pw}, {xrange.hi[0], 1.5 * pw}};
}

std::vector<std::uint8_t> binary_of(const RasterField& f) {
  std::vector<std::uint8_t> b(f.samples.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = f.samples[i] > 0.5 ? 1 : 0;
  return b;
}

// Chebyshev dilation/erosion by r pixels, two-pass.
std::vector<std::uint8_t> morph(const std::vector<std::uint8_t>& in, int w,
                                int h, int r, bool dilate) {
  const std::uint8_t miss = dilate ? 0 : 1;
  std::vector<std::uint8_t> tmp(in.size()), out(in.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = dilate ? 0 : 1;
      for (int dx = -r; dx <= r; ++dx) {
        const int xx = x + dx;
        const std::uint8_t s = (xx >= 0 && xx < w) ? in[y * w + xx] : miss;
        v = dilate ? (v | s) : (v & s);
      }
      tmp[y * w + x] = v;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = dilate ? 0 : 1;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = y + dy;
        const std::uint8_t s = (yy >= 0 && yy < h) ? tmp[yy * w + x] : miss;
        v = dilate ? (v | s) : (v & s);
      }
      out[y * w + x] = v;
    }
  return out;
}

}  // namespace

CentralSetEstimate estimate_central_set(const IfsSpec& spec,
                                        const CentralSetParams& params) {
  if (params.resolution < 8) throw std::invalid_argument("resolution too small");
  if (params.cloud_size == 0) throw std::invalid_argument("empty attractor cloud");

  const PointCloud cloud = chaos_game(spec, params.cloud_size, 100, params.seed);
  const Box abox = bounding_box(cloud);
  const double diam = std::max(abox.diameter(), 1e-12);

  Box window{{}, {}};
  int width = params.resolution, height = 0;
  if (spec.dim() == 1) {
    Box xr = abox.inflated(0.25 * diam);
    if (params.window) {
      xr = params.window->dim() == 1
               ? *params.window
               : Box{{params.window->lo[0]}, {params.window->hi[0]}};
    }
    window = lift_window_1d(xr, width);
    height = 3;
    if (xr.hi[0] < abox.lo[0] || xr.lo[0] > abox.hi[0])
      throw std::invalid_argument("window does not intersect the attractor");
  } else {
    window = params.window ? *params.window : abox.inflated(0.25 * diam);
    if (window.dim() != 2) throw std::invalid_argument("window must be 2-d");
    if (!window.intersects(abox))
      throw std::invalid_argument("window does not intersect the attractor");
    height = std::max(
        8, static_cast<int>(std::lround(width * window.extent(1) / window.extent(0))));
  }

  const double cutoff = params.prune_factor * window.diameter();
  const PointCloud basin = fast_basin_slice(spec, cloud, params.neighbor_depth,
                                            cutoff, params.basin_max_points);

  CentralSetEstimate out;
  out.neighbor_depth = params.neighbor_depth;
  out.resolution = params.resolution;
  out.seed = params.seed;
  out.dist_a = distance_field(cloud, window, width, height);
  if (basin.empty()) {
    // Every fast-basin point was pruned past the cutoff; treat H as at least
    // that far away.
    out.dist_h = RasterField::zeros(window, width, height);
    std::fill(out.dist_h.samples.begin(), out.dist_h.samples.end(), cutoff);
  } else {
    out.dist_h = distance_field(basin, window, width, height);
  }

  out.margin = RasterField::zeros(window, width, height);
  out.mask = RasterField::zeros(window, width, height);
  // Both distance fields carry sampling noise on the order of the cloud's
  // inter-point spacing, so a strict > 0 test would keep coin-flip pixels
  // wherever the basin accumulates on the attractor. Require the margin to
  // clear a fraction of a pixel instead; ties stay off either way.
  const double tie = std::max(
      kTieTol, 0.25 * std::max(out.margin.pixel_w(), out.margin.pixel_h()));
  for (std::size_t i = 0; i < out.margin.samples.size(); ++i) {
    const double m = out.dist_h.samples[i] - out.dist_a.samples[i];
    out.margin.samples[i] = m;
    out.mask.samples[i] = m > tie ? 1.0 : 0.0;
  }

  out.osc_evidence = out.on_pixels() > 0;
  for (int x = 0; x < width && !out.unbounded_suspected; ++x)
    out.unbounded_suspected =
        out.mask.at(x, 0) > 0.5 || out.mask.at(x, height - 1) > 0.5;
  if (spec.dim() == 1) out.unbounded_suspected = false;  // strip rows don't count
  for (int y = 0; y < height && !out.unbounded_suspected; ++y)
    out.unbounded_suspected =
        out.mask.at(0, y) > 0.5 || out.mask.at(width - 1, y) > 0.5;
  return out;
}

FeasibilityReport feasibility_check(const IfsSpec& spec,
                                    const CentralSetEstimate& c, int band_px) {
  FeasibilityReport rep;
  rep.band_px = band_px;
  rep.osc_evidence = c.on_pixels() > 0;
  if (!rep.osc_evidence) return rep;

  const RasterField& mask = c.mask;
  const int w = mask.width, h = mask.height;
  const auto on = binary_of(mask);
  const auto dilated = morph(on, w, h, band_px, true);

  const bool one_d = spec.dim() == 1;
  const int mid = h / 2;

  // Containment: f_i maps every mask pixel center into the dilated mask.
  std::size_t mask_count = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (on[static_cast<std::size_t>(y) * w + x] && (!one_d || y == mid))
        ++mask_count;

  for (int d = 1; d <= spec.alphabet(); ++d) {
    const Similitude& f = spec.map(d);
    std::size_t bad = 0;
    double q[2];
    for (int y = 0; y < h; ++y) {
      if (one_d && y != mid) continue;
      for (int x = 0; x < w; ++x) {
        if (!on[static_cast<std::size_t>(y) * w + x]) continue;
        const Vec p = mask.center(x, y);
        if (one_d) {
          f.apply_inplace(p.data(), q);
          q[1] = 0.0;
        } else {
          f.apply_inplace(p.data(), q);
        }
        const int ix = static_cast<int>((q[0] - mask.window.lo[0]) / mask.pixel_w());
        const int iy = static_cast<int>((q[1] - mask.window.lo[1]) / mask.pixel_h());
        if (ix < 0 || ix >= w || iy < 0 || iy >= h ||
            !dilated[static_cast<std::size_t>(iy) * w + ix])
          ++bad;
      }
    }
    rep.containment_violation.push_back(
        mask_count ? static_cast<double>(bad) / mask_count : 0.0);
  }

  // Disjointness: rasterize each image f_i(C~) by pulling pixel centers back
  // through f_i^{-1}, erode by the band, and intersect pairwise.
  std::vector<std::vector<std::uint8_t>> images;
  for (int d = 1; d <= spec.alphabet(); ++d) {
    const Similitude inv = invert(spec.map(d));
    std::vector<std::uint8_t> img(on.size(), 0);
    double q[2];
    for (int y = 0; y < h; ++y) {
      if (one_d && y != mid) continue;
      for (int x = 0; x < w; ++x) {
        const Vec p = mask.center(x, y);
        if (one_d) {
          inv.apply_inplace(p.data(), q);
          q[1] = 0.0;
        } else {
          inv.apply_inplace(p.data(), q);
        }
        const int ix = static_cast<int>((q[0] - mask.window.lo[0]) / mask.pixel_w());
        const int iy = one_d ? mid
                             : static_cast<int>((q[1] - mask.window.lo[1]) /
                                                mask.pixel_h());
        if (ix >= 0 && ix < w && iy >= 0 && iy < h &&
            on[static_cast<std::size_t>(iy) * w + ix])
          img[static_cast<std::size_t>(y) * w + x] = 1;
      }
    }
    images.push_back(morph(img, w, h, band_px, false));
  }

  bool ok = true;
  for (double frac : rep.containment_violation)
    if (frac > 0.0) ok = false;
  for (int i = 0; i < spec.alphabet(); ++i)
    for (int j = i + 1; j < spec.alphabet(); ++j) {
      std::size_t shared = 0;
      for (std::size_t k = 0; k < on.size(); ++k)
        if (images[i][k] && images[j][k]) ++shared;
      if (shared) {
        rep.overlaps.push_back({i + 1, j + 1, shared});
        ok = false;
      }
    }
  rep.pass = ok;
  return rep;
}

namespace {

struct ContourPoint {
  double x, y;
};
struct Segment {
  ContourPoint a, b;
};

ContourPoint edge_cross(double xa, double ya, double va, double xb, double yb,
                        double vb) {
  const double t = va / (va - vb);
  return {xa + t * (xb - xa), ya + t * (yb - ya)};
}

}  // namespace

BoundaryCurve contour_zero(const RasterField& m) {
  const int w = m.width, h = m.height;

  std::vector<Segment> segs;
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const Vec c00 = m.center(x, y);
      const Vec c11 = m.center(x + 1, y + 1);
      const double v00 = m.at(x, y), v10 = m.at(x + 1, y);
      const double v01 = m.at(x, y + 1), v11 = m.at(x + 1, y + 1);
      int idx = 0;
      if (v00 > 0) idx |= 1;
      if (v10 > 0) idx |= 2;
      if (v11 > 0) idx |= 4;
      if (v01 > 0) idx |= 8;
      if (idx == 0 || idx == 15) continue;

      const ContourPoint pb = edge_cross(c00[0], c00[1], v00, c11[0], c00[1], v10);
      const ContourPoint pr = edge_cross(c11[0], c00[1], v10, c11[0], c11[1], v11);
      const ContourPoint pt = edge_cross(c00[0], c11[1], v01, c11[0], c11[1], v11);
      const ContourPoint pl = edge_cross(c00[0], c00[1], v00, c00[0], c11[1], v01);

      auto emit = [&](ContourPoint a, ContourPoint b) { segs.push_back({a, b}); };
      switch (idx) {
        case 1: case 14: emit(pl, pb); break;
        case 2: case 13: emit(pb, pr); break;
        case 3: case 12: emit(pl, pr); break;
        case 4: case 11: emit(pr, pt); break;
        case 6: case 9:  emit(pb, pt); break;
        case 7: case 8:  emit(pl, pt); break;
        case 5: case 10: {
          const double center = 0.25 * (v00 + v10 + v01 + v11);
          const bool flip = (idx == 5) == (center > 0);
          if (flip) { emit(pl, pb); emit(pr, pt); }
          else      { emit(pl, pt); emit(pb, pr); }
          break;
        }
      }
    }
  }

  // Chain segments into polylines via quantized endpoint matching.
  const double eps = std::min(m.pixel_w(), m.pixel_h()) / 1024.0;
  auto key = [&](const ContourPoint& p) {
    return std::pair<std::int64_t, std::int64_t>{std::llround(p.x / eps),
                                                 std::llround(p.y / eps)};
  };
  std::multimap<std::pair<std::int64_t, std::int64_t>, std::size_t> ends;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    ends.emplace(key(segs[i].a), i);
    ends.emplace(key(segs[i].b), i);
  }
  std::vector<bool> used(segs.size(), false);

  BoundaryCurve out;
  for (std::size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    used[start] = true;
    std::vector<std::array<double, 2>> line{{segs[start].a.x, segs[start].a.y},
                                            {segs[start].b.x, segs[start].b.y}};
    for (int dir = 0; dir < 2; ++dir) {
      for (;;) {
        const std::array<double, 2> tip = dir == 0 ? line.back() : line.front();
        const auto range = ends.equal_range(key({tip[0], tip[1]}));
        std::size_t next = segs.size();
        for (auto it = range.first; it != range.second; ++it)
          if (!used[it->second]) {
            next = it->second;
            break;
          }
        if (next == segs.size()) break;
        used[next] = true;
        const auto ka = key(segs[next].a);
        const ContourPoint& far =
            ka == key({tip[0], tip[1]}) ? segs[next].b : segs[next].a;
        if (dir == 0)
          line.push_back({far.x, far.y});
        else
          line.insert(line.begin(), {far.x, far.y});
      }
    }
    out.polylines.push_back(std::move(line));
  }
  // Deterministic order: by first point, lexicographic.
  std::sort(out.polylines.begin(), out.polylines.end());
  return out;
}

BoundaryCurve extract_boundary(const CentralSetEstimate& c) {
  if (c.on_pixels() == 0) throw std::invalid_argument("empty mask");
  return contour_zero(c.margin);
}

std::vector<std::array<double, 3>> touching_circles(const CentralSetEstimate& c,
                                                    const BoundaryCurve& b,
                                                    std::size_t stride) {
  if (stride == 0) stride = 1;
  std::vector<std::array<double, 3>> out;
  for (const auto& line : b.polylines)
    for (std::size_t i = 0; i < line.size(); i += stride)
      out.push_back({line[i][0], line[i][1],
                     c.dist_a.sample(line[i][0], line[i][1])});
  return out;
}

TileShape tile_shape_from_mask(const CentralSetEstimate& c) {
  if (c.on_pixels() == 0) throw std::invalid_argument("empty mask");
  return TileShape::raster_stencil(c.mask, "central-set");
}

void write_csv(const BoundaryCurve& b, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  for (std::size_t i = 0; i < b.polylines.size(); ++i) {
    if (i) out << '\n';
    for (const auto& p : b.polylines[i]) out << p[0] << ',' << p[1] << '\n';
  }
}

void write_svg(const BoundaryCurve& b, const Box& viewport,
               const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(10);
  const double w = viewport.extent(0), h = viewport.extent(1);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' '
      << h << "\">\n";
  for (const auto& line : b.polylines) {
    out << "<path fill=\"none\" stroke=\"#d4aa00\" stroke-width=\""
        << 0.002 * std::max(w, h) << "\" d=\"";
    for (std::size_t i = 0; i < line.size(); ++i)
      out << (i ? " L " : "M ") << line[i][0] - viewport.lo[0] << ' '
          << viewport.hi[1] - line[i][1];
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace ifstile
