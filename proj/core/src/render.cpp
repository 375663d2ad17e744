#include "ifstile/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ifstile {

namespace {

std::array<std::uint8_t, 3> parse_hex(const std::string& c) {
  if (c.size() != 7 || c[0] != '#')
    throw std::invalid_argument("color must be #RRGGBB: " + c);
  auto nib = [&](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw std::invalid_argument("bad hex digit in color " + c);
  };
  return {static_cast<std::uint8_t>(nib(c[1]) * 16 + nib(c[2])),
          static_cast<std::uint8_t>(nib(c[3]) * 16 + nib(c[4])),
          static_cast<std::uint8_t>(nib(c[5]) * 16 + nib(c[6]))};
}

constexpr const char* kPalette[] = {
    "#4878a8", "#e49444", "#5ba053", "#c64f4f", "#9470b0",
    "#8a7a66", "#d884c3", "#787878", "#b5b152", "#5fb8c9",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

bool layer_empty(const Layer& l) {
  switch (l.kind) {
    case Layer::Kind::TilingLayer: return l.tiling.tiles.empty();
    case Layer::Kind::CloudLayer:  return l.cloud.empty();
    case Layer::Kind::FieldLayer:  return l.field.samples.empty();
    case Layer::Kind::CurveLayer:  return l.curve.polylines.empty();
  }
  return true;
}

// Tile geometry in data coordinates: closed rings (fillable) and, for cloud
// tiles, sample points instead.
struct TileGeometry {
  std::vector<std::vector<std::array<double, 2>>> rings;
  std::vector<std::array<double, 2>> dots;
};

std::array<double, 2> map_point(const Similitude& f, double x, double y) {
  if (f.dim() == 1) {
    double out;
    f.apply_inplace(&x, &out);
    return {out, y};
  }
  const double in[2] = {x, y};
  double out[2];
  f.apply_inplace(in, out);
  return {out[0], out[1]};
}

TileGeometry tile_geometry(const Tiling& t, const Tile& tile, double bar_half) {
  const TileShape& shape = t.shape_of(tile);
  const Similitude& f = tile.transform;
  TileGeometry g;
  switch (shape.kind) {
    case TileShape::Kind::Interval: {
      // 1-d tiles draw as bars of fixed height around the line.
      const auto a = map_point(f, shape.interval_lo, 0.0);
      const auto b = map_point(f, shape.interval_hi, 0.0);
      const double lo = std::min(a[0], b[0]), hi = std::max(a[0], b[0]);
      g.rings.push_back({{lo, -bar_half}, {hi, -bar_half}, {hi, bar_half}, {lo, bar_half}});
      break;
    }
    case TileShape::Kind::Box2: {
      const Box& b = shape.box;
      g.rings.push_back({map_point(f, b.lo[0], b.lo[1]), map_point(f, b.hi[0], b.lo[1]),
                         map_point(f, b.hi[0], b.hi[1]), map_point(f, b.lo[0], b.hi[1])});
      break;
    }
    case TileShape::Kind::Polygon: {
      std::vector<std::array<double, 2>> ring;
      for (const auto& p : shape.polygon) ring.push_back(map_point(f, p[0], p[1]));
      g.rings.push_back(std::move(ring));
      break;
    }
    case TileShape::Kind::Cloud: {
      const std::size_t n = shape.cloud.size();
      const std::size_t stride = std::max<std::size_t>(1, n / 1500);
      for (std::size_t i = 0; i < n; i += stride) {
        const double* p = shape.cloud.point(i);
        g.dots.push_back(map_point(f, p[0], shape.cloud.dim > 1 ? p[1] : 0.0));
      }
      break;
    }
    case TileShape::Kind::Stencil: {
      RasterField level = shape.stencil;
      for (double& v : level.samples) v -= 0.5;
      const BoundaryCurve contour = contour_zero(level);
      for (const auto& line : contour.polylines) {
        std::vector<std::array<double, 2>> ring;
        for (const auto& p : line) ring.push_back(map_point(f, p[0], p[1]));
        g.rings.push_back(std::move(ring));
      }
      break;
    }
  }
  return g;
}

std::string tile_fill(const Tiling& t, const Tile& tile, const Style& style,
                      const std::vector<double>& classes) {
  if (!style.color_by_scale) return style.fill;
  const double r = tile.transform.ratio();
  std::size_t cls = 0;
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (std::abs(classes[i] - r) <= kSimilarityTol * (1.0 + r)) {
      cls = i;
      break;
    }
  return palette_color(cls);
}

}  // namespace

Layer Layer::of(Tiling t, Style s) {
  Layer l;
  l.kind = Kind::TilingLayer;
  l.tiling = std::move(t);
  l.style = std::move(s);
  return l;
}
Layer Layer::of(PointCloud c, Style s) {
  Layer l;
  l.kind = Kind::CloudLayer;
  l.cloud = std::move(c);
  l.style = std::move(s);
  return l;
}
Layer Layer::of(RasterField f, Style s) {
  Layer l;
  l.kind = Kind::FieldLayer;
  l.field = std::move(f);
  l.style = std::move(s);
  return l;
}
Layer Layer::of(BoundaryCurve b, Style s) {
  Layer l;
  l.kind = Kind::CurveLayer;
  l.curve = std::move(b);
  l.style = std::move(s);
  return l;
}

int Scene::height() const {
  return std::max(
      1, static_cast<int>(std::lround(width * viewport.extent(1) / viewport.extent(0))));
}

std::vector<double> scale_classes(const Tiling& t, double tol) {
  std::vector<double> r;
  for (const auto& tile : t.tiles) r.push_back(tile.transform.ratio());
  std::sort(r.rbegin(), r.rend());
  std::vector<double> out;
  for (double v : r)
    if (out.empty() || std::abs(out.back() - v) > tol * (1.0 + v)) out.push_back(v);
  return out;
}

std::string palette_color(std::size_t scale_class) {
  return kPalette[scale_class % kPaletteSize];
}

std::string render_svg(const Scene& scene) {
  bool any = false;
  for (const auto& l : scene.layers) any = any || !layer_empty(l);
  if (!any) throw std::invalid_argument("empty scene");

  const Box& vp = scene.viewport;
  const double s = scene.width / vp.extent(0);
  const int W = scene.width, H = scene.height();
  auto X = [&](double x) { return (x - vp.lo[0]) * s; };
  auto Y = [&](double y) { return (vp.hi[1] - y) * s; };

  std::ostringstream out;
  out.precision(10);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";

  const double bar_half = 0.04 * vp.extent(1);
  for (const auto& layer : scene.layers) {
    if (layer_empty(layer)) continue;
    const Style& st = layer.style;
    out << "<g opacity=\"" << st.opacity << "\">\n";
    switch (layer.kind) {
      case Layer::Kind::TilingLayer: {
        const auto classes = scale_classes(layer.tiling);
        for (const auto& tile : layer.tiling.tiles) {
          const TileGeometry g = tile_geometry(layer.tiling, tile, bar_half);
          const std::string fill = tile_fill(layer.tiling, tile, st, classes);
          if (!g.rings.empty()) {
            out << "<path fill=\"" << (fill.empty() ? "none" : fill)
                << "\" fill-rule=\"evenodd\" stroke=\""
                << (st.stroke.empty() ? "none" : st.stroke)
                << "\" stroke-width=\"" << st.stroke_width << "\" d=\"";
            for (const auto& ring : g.rings) {
              for (std::size_t i = 0; i < ring.size(); ++i)
                out << (i ? " L " : "M ") << X(ring[i][0]) << ' ' << Y(ring[i][1]);
              out << " Z ";
            }
            out << "\"/>\n";
          }
          for (const auto& d : g.dots)
            out << "<circle cx=\"" << X(d[0]) << "\" cy=\"" << Y(d[1])
                << "\" r=\"" << st.point_radius << "\" fill=\""
                << (fill.empty() ? "#000000" : fill) << "\"/>\n";
        }
        break;
      }
      case Layer::Kind::CloudLayer: {
        const std::size_t n = layer.cloud.size();
        const std::size_t stride = std::max<std::size_t>(1, n / 50000);
        for (std::size_t i = 0; i < n; i += stride) {
          const double* p = layer.cloud.point(i);
          const double y = layer.cloud.dim > 1 ? p[1] : 0.0;
          out << "<circle cx=\"" << X(p[0]) << "\" cy=\"" << Y(y) << "\" r=\""
              << st.point_radius << "\" fill=\""
              << (st.fill.empty() ? "#000000" : st.fill) << "\"/>\n";
        }
        break;
      }
      case Layer::Kind::FieldLayer: {
        // Vector output draws the 0.5-level region of the field.
        RasterField level = layer.field;
        for (double& v : level.samples) v -= 0.5;
        const BoundaryCurve contour = contour_zero(level);
        if (!contour.polylines.empty()) {
          out << "<path fill=\"" << (st.fill.empty() ? "none" : st.fill)
              << "\" fill-rule=\"evenodd\" stroke=\""
              << (st.stroke.empty() ? "none" : st.stroke)
              << "\" stroke-width=\"" << st.stroke_width << "\" d=\"";
          for (const auto& line : contour.polylines) {
            for (std::size_t i = 0; i < line.size(); ++i)
              out << (i ? " L " : "M ") << X(line[i][0]) << ' ' << Y(line[i][1]);
            out << " Z ";
          }
          out << "\"/>\n";
        }
        break;
      }
      case Layer::Kind::CurveLayer: {
        for (const auto& line : layer.curve.polylines) {
          out << "<path fill=\"none\" stroke=\""
              << (st.stroke.empty() ? "#000000" : st.stroke)
              << "\" stroke-width=\"" << st.stroke_width << "\" d=\"";
          for (std::size_t i = 0; i < line.size(); ++i)
            out << (i ? " L " : "M ") << X(line[i][0]) << ' ' << Y(line[i][1]);
          out << "\"/>\n";
        }
        break;
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void render_svg(const Scene& scene, const std::string& path) {
  const std::string doc = render_svg(scene);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << doc;
}

namespace {

struct Painter {
  RgbRaster& img;
  const Box& vp;
  double sx, sy;

  int px(double x) const { return static_cast<int>((x - vp.lo[0]) * sx); }
  int py(double y) const { return static_cast<int>((vp.hi[1] - y) * sy); }

  void blend(int x, int y, const std::array<std::uint8_t, 3>& c, double alpha) {
    if (x < 0 || x >= img.width || y < 0 || y >= img.height) return;
    std::uint8_t* p = img.at(x, y);
    for (int k = 0; k < 3; ++k)
      p[k] = static_cast<std::uint8_t>(
          std::lround((1.0 - alpha) * p[k] + alpha * c[k]));
  }

  void dot(double x, double y, const std::array<std::uint8_t, 3>& c,
           double radius, double alpha) {
    const int cx = px(x), cy = py(y);
    const int r = std::max(0, static_cast<int>(std::lround(radius - 0.5)));
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (dx * dx + dy * dy <= r * r + r) blend(cx + dx, cy + dy, c, alpha);
  }

  void line(double x0, double y0, double x1, double y1,
            const std::array<std::uint8_t, 3>& c, double alpha) {
    const double X0 = (x0 - vp.lo[0]) * sx, Y0 = (vp.hi[1] - y0) * sy;
    const double X1 = (x1 - vp.lo[0]) * sx, Y1 = (vp.hi[1] - y1) * sy;
    const double len = std::max(std::abs(X1 - X0), std::abs(Y1 - Y0));
    const int steps = std::max(1, static_cast<int>(std::ceil(len)));
    for (int i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) / steps;
      blend(static_cast<int>(X0 + t * (X1 - X0)),
            static_cast<int>(Y0 + t * (Y1 - Y0)), c, alpha);
    }
  }
};

}  // namespace

RgbRaster render_raster(const Scene& scene) {
  bool any = false;
  for (const auto& l : scene.layers) any = any || !layer_empty(l);
  if (!any) throw std::invalid_argument("empty scene");

  RgbRaster img;
  img.width = scene.width;
  img.height = scene.height();
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height * 3, 255);

  const Box& vp = scene.viewport;
  Painter paint{img, vp, img.width / vp.extent(0), img.height / vp.extent(1)};
  const double bar_half = 0.04 * vp.extent(1);

  for (const auto& layer : scene.layers) {
    if (layer_empty(layer)) continue;
    const Style& st = layer.style;
    switch (layer.kind) {
      case Layer::Kind::TilingLayer: {
        const auto classes = scale_classes(layer.tiling);
        const auto stroke =
            st.stroke.empty() ? std::array<std::uint8_t, 3>{0, 0, 0}
                              : parse_hex(st.stroke);
        for (const auto& tile : layer.tiling.tiles) {
          const std::string fill_hex = tile_fill(layer.tiling, tile, st, classes);
          const auto fill = fill_hex.empty() ? std::array<std::uint8_t, 3>{0, 0, 0}
                                             : parse_hex(fill_hex);
          const TileShape& shape = layer.tiling.shape_of(tile);
          if (shape.kind == TileShape::Kind::Cloud) {
            const TileGeometry g = tile_geometry(layer.tiling, tile, bar_half);
            for (const auto& d : g.dots)
              paint.dot(d[0], d[1], fill, st.point_radius, st.opacity);
            continue;
          }
          // Fill by membership over the tile's pixel footprint, then stroke
          // the footprint boundary.
          RasterField local = RasterField::zeros(vp, img.width, img.height);
          rasterize_tile(layer.tiling,
                         static_cast<std::size_t>(&tile - layer.tiling.tiles.data()),
                         local);
          auto on = [&](int x, int y) {
            return x >= 0 && x < img.width && y >= 0 && y < img.height &&
                   local.at(x, img.height - 1 - y) > 0.5;
          };
          for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
              if (!on(x, y)) continue;
              const bool edge = !on(x - 1, y) || !on(x + 1, y) || !on(x, y - 1) ||
                                !on(x, y + 1);
              paint.blend(x, y, edge && !st.stroke.empty() ? stroke : fill,
                          st.opacity);
            }
        }
        break;
      }
      case Layer::Kind::CloudLayer: {
        const auto c = st.fill.empty() ? std::array<std::uint8_t, 3>{0, 0, 0}
                                       : parse_hex(st.fill);
        for (std::size_t i = 0; i < layer.cloud.size(); ++i) {
          const double* p = layer.cloud.point(i);
          paint.dot(p[0], layer.cloud.dim > 1 ? p[1] : 0.0, c, st.point_radius,
                    st.opacity);
        }
        break;
      }
      case Layer::Kind::FieldLayer: {
        const auto c = st.fill.empty() ? std::array<std::uint8_t, 3>{0, 0, 0}
                                       : parse_hex(st.fill);
        double maxv = 0.0;
        for (double v : layer.field.samples) maxv = std::max(maxv, v);
        for (int y = 0; y < img.height; ++y)
          for (int x = 0; x < img.width; ++x) {
            const double dx = vp.lo[0] + (x + 0.5) * vp.extent(0) / img.width;
            const double dy = vp.hi[1] - (y + 0.5) * vp.extent(1) / img.height;
            const double v = layer.field.sample(dx, dy, 0.0);
            if (v <= 0.0) continue;
            const double a = maxv <= 1.0 ? v : v / maxv;
            paint.blend(x, y, c, st.opacity * std::min(1.0, a));
          }
        break;
      }
      case Layer::Kind::CurveLayer: {
        const auto c = st.stroke.empty() ? std::array<std::uint8_t, 3>{0, 0, 0}
                                         : parse_hex(st.stroke);
        for (const auto& line : layer.curve.polylines)
          for (std::size_t i = 0; i + 1 < line.size(); ++i)
            paint.line(line[i][0], line[i][1], line[i + 1][0], line[i + 1][1], c,
                       st.opacity);
        break;
      }
    }
  }
  return img;
}

void write_ppm(const RgbRaster& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

}  // namespace ifstile
