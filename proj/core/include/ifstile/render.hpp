#pragma once

// Deterministic vector (SVG 1.1) and raster (binary PPM) rendering of
// tilings, point clouds, scalar fields, and boundary curves.

#include <cstdint>
#include <string>
#include <vector>

#include "ifstile/attractor.hpp"
#include "ifstile/centralset.hpp"
#include "ifstile/tiling.hpp"

namespace ifstile {

struct Style {
  std::string fill = "#c8c8c8";    // #RRGGBB; empty disables fill
  std::string stroke = "#000000";  // empty disables stroke
  double stroke_width = 1.5;       // output pixels
  double opacity = 1.0;
  double point_radius = 0.75;  // output pixels, cloud layers
  /// Tiling layers: color tiles by scale class from the default palette,
  /// ignoring `fill`.
  bool color_by_scale = true;
};

struct Layer {
  enum class Kind { TilingLayer, CloudLayer, FieldLayer, CurveLayer };
  Kind kind = Kind::TilingLayer;
  Tiling tiling;
  PointCloud cloud;
  RasterField field;
  BoundaryCurve curve;
  Style style;

  static Layer of(Tiling t, Style s = {});
  static Layer of(PointCloud c, Style s = {});
  static Layer of(RasterField f, Style s = {});
  static Layer of(BoundaryCurve b, Style s = {});
};

struct Scene {
  std::vector<Layer> layers;  // painted in order
  Box viewport{{0.0, 0.0}, {1.0, 1.0}};
  int width = 1024;  // height follows the viewport aspect ratio

  int height() const;
};

/// Distinct tile scale ratios, descending; index = scale class.
std::vector<double> scale_classes(const Tiling& t, double tol = kSimilarityTol);
/// #RRGGBB for a scale class (fixed palette, cycled).
std::string palette_color(std::size_t scale_class);

/// Throws std::invalid_argument("empty scene") when no layer draws anything.
std::string render_svg(const Scene& scene);
void render_svg(const Scene& scene, const std::string& path);

struct RgbRaster {
  int width = 0, height = 0;
  std::vector<std::uint8_t> pixels;  // interleaved RGB, row 0 at the top

  std::uint8_t* at(int x, int y) {
    return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
};

RgbRaster render_raster(const Scene& scene);
/// Binary PPM (P6); bytes are a pure function of the image.
void write_ppm(const RgbRaster& image, const std::string& path);

}  // namespace ifstile
