#pragma once

// Budgeted cut-set enumeration of words and the tilings built from them:
// prefix tilings, canonical tilings, overlap/coverage reports, shift
// equivalence and commensurability classification.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ifstile/attractor.hpp"
#include "ifstile/geometry.hpp"

namespace ifstile {

/// The geometry a tile transform is applied to. Transform-level statements
/// (nesting, shift equivalence, the canonical relation) never look at it;
/// rasterization and rendering do.
struct TileShape {
  enum class Kind { Interval, Box2, Polygon, Cloud, Stencil };

  Kind kind = Kind::Interval;
  std::string label;

  // exactly one payload is meaningful, per kind
  double interval_lo = 0.0, interval_hi = 1.0;
  Box box{{0.0, 0.0}, {1.0, 1.0}};
  std::vector<std::array<double, 2>> polygon;  // simple, CCW
  PointCloud cloud;
  RasterField stencil;       // binary mask; window is the coordinate frame
  double cloud_radius = 0.0; // membership radius for Kind::Cloud

  static TileShape interval(double lo, double hi, std::string label = "interval");
  static TileShape box2(const Box& b, std::string label = "box");
  static TileShape simple_polygon(std::vector<std::array<double, 2>> pts,
                                  std::string label = "polygon");
  static TileShape attractor_cloud(PointCloud c, std::string label = "attractor");
  static TileShape raster_stencil(RasterField mask, std::string label = "central-set");

  int dim() const { return kind == Kind::Interval ? 1 : 2; }
  Box bounds() const;
  /// Membership test in shape coordinates.
  bool contains(const double* x) const;
};

struct Tile {
  Similitude transform;  // composed f_{-(i|k)} o f_{(j|l)}
  int shape_ref = 0;
  Word word_i, word_j;
  double cost = 0.0;  // cost of word_j
};

struct Tiling {
  std::vector<Tile> tiles;  // deduplicated by transform, deterministic order
  std::vector<TileShape> shapes;
  Word address_prefix;
  double budget = 0.0;

  const TileShape& shape_of(const Tile& t) const { return shapes[t.shape_ref]; }
  /// Bounding box of all transformed tile shapes.
  Box support_bounds() const;
};

/// Prefix-free, complete set of words whose cumulative cost first exceeds
/// the budget: c(j|l-1) <= budget < c(j|l). Lexicographic order.
struct CutSet {
  std::vector<Word> words;
  double budget = 0.0;
};

inline constexpr std::size_t kCutSetCap = 1000000;

CutSet cut_set(const CostFunction& cf, double budget,
               std::size_t cap = kCutSetCap);

/// The tiling with address prefix i|k: tile transforms f_{-(i|k)} o f_{(j|l)}
/// over the cut set at budget c(i|k), deduplicated.
Tiling tiling_prefix(const IfsSpec& spec, const CostFunction& cf,
                     const TileShape& shape, const Word& prefix,
                     std::size_t cap = kCutSetCap);

/// Truncations k = 0..k_max of the tiling of an infinite address; each
/// contains the previous as a transform subset.
std::vector<Tiling> tiling_sequence(const IfsSpec& spec, const CostFunction& cf,
                                    const TileShape& shape, const Address& address,
                                    int k_max, std::size_t cap = kCutSetCap);

/// Canonical tiling: transforms s^{-k} o f_{(i|l)} over the integer-budget-k
/// cut set with costs equal to the scale exponents a_i (which must be
/// integers). Shape defaults to a deterministic attractor cloud.
Tiling canonical_tiling(const IfsSpec& spec, int k,
                        const TileShape* shape = nullptr);

/// True iff the prefix tiling at i|k equals f_{-(i|k)} o scale(s^{c(i|k)})
/// applied to the canonical tiling T_{c(i|k)}, as transform sets (1e-9).
bool canonical_relation_check(const IfsSpec& spec, const Address& address, int k);

/// Transform-set comparison with tolerance relative to translation spread.
bool same_transform_set(const std::vector<Tile>& a, const std::vector<Tile>& b,
                        double tol = kSimilarityTol);

struct OverlapReport {
  enum class Kind { Disjoint, Touching, Overlapping };
  struct Pair {
    std::size_t a = 0, b = 0;
    Kind kind = Kind::Disjoint;
    double measure = 0.0;  // intersection length (1-d) or area (2-d)
  };
  std::vector<Pair> pairs;  // only meeting pairs are recorded
  std::size_t touching = 0, overlapping = 0;
  double max_overlap = 0.0;
};

/// Pairwise tile intersections. Interval tilings are handled analytically;
/// 2-d tilings are rasterized at `resolution` pixels across the support and
/// a pair counts as overlapping only when the two tiles share a pixel that
/// is more than `band_px` pixels interior to both.
OverlapReport overlap_report(const Tiling& t, int resolution, int band_px = 2);

/// Rigidity of shifted addresses: requires sigma^p i ==
/// sigma^q j, c(i|p) == c(j|q) and costs equal to the scale exponents.
/// Returns the connecting isometry E when the transform sets of the
/// truncations match for r = 0..k_max, std::nullopt when they do not.
std::optional<Similitude> shift_equivalence_check(
    const IfsSpec& spec, const CostFunction& cf, const TileShape& shape,
    const Address& i, const Address& j, int p, int q, int k_max,
    std::size_t cap = kCutSetCap);

struct Commensurability {
  bool commensurate = false;
  double ratio = 0.0;  // generator r in (0, 1) when commensurate
  std::size_t distinct_scales = 0;
};

/// All pairwise log-scale ratios integer multiples of one log r (1e-9)?
Commensurability commensurability(const Tiling& t);

/// Tiles whose transformed shape meets the window (coarse bbox test refined
/// by membership sampling).
Tiling patch(const Tiling& t, const Box& window);

/// Fraction of window pixels covered by at least one tile.
double coverage_fraction(const Tiling& t, const Box& window, int resolution);

/// Rasterize one tile's membership into `field` (accumulating max).
void rasterize_tile(const Tiling& t, std::size_t index, RasterField& field);

void write_json(const Tiling& t, const std::string& path);
void write_csv(const Tiling& t, const std::string& path);

}  // namespace ifstile
