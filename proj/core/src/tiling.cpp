#include "ifstile/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace ifstile {

namespace {

// Shared lazy spatial index for cloud-shaped tiles.
struct CloudIndexCache {
  std::shared_ptr<const PointGrid> grid;
};

std::shared_ptr<const PointGrid>& cloud_grid_slot(const TileShape& shape) {
  // Keyed by the cloud's data pointer; shapes are immutable once built.
  static thread_local std::unordered_map<const double*, std::shared_ptr<const PointGrid>> cache;
  return cache[shape.cloud.coords.data()];
}

Box transformed_bounds(const Similitude& f, const Box& b) {
  const int n = f.dim();
  Box out{Vec(n, std::numeric_limits<double>::infinity()),
          Vec(n, -std::numeric_limits<double>::infinity())};
  const int corners = 1 << n;
  Vec x(n), y(n);
  for (int mask = 0; mask < corners; ++mask) {
    for (int d = 0; d < n; ++d) x[d] = (mask >> d & 1) ? b.hi[d] : b.lo[d];
    f.apply_inplace(x.data(), y.data());
    for (int d = 0; d < n; ++d) {
      out.lo[d] = std::min(out.lo[d], y[d]);
      out.hi[d] = std::max(out.hi[d], y[d]);
    }
  }
  return out;
}

bool point_in_polygon(const std::vector<std::array<double, 2>>& poly, double x,
                      double y) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a[1] > y) != (b[1] > y)) {
      const double t = (y - a[1]) / (b[1] - a[1]);
      if (x < a[0] + t * (b[0] - a[0])) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

TileShape TileShape::interval(double lo, double hi, std::string label) {
  TileShape s;
  s.kind = Kind::Interval;
  s.interval_lo = lo;
  s.interval_hi = hi;
  s.label = std::move(label);
  return s;
}

TileShape TileShape::box2(const Box& b, std::string label) {
  TileShape s;
  s.kind = Kind::Box2;
  s.box = b;
  s.label = std::move(label);
  return s;
}

TileShape TileShape::simple_polygon(std::vector<std::array<double, 2>> pts,
                                    std::string label) {
  if (pts.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
  TileShape s;
  s.kind = Kind::Polygon;
  s.polygon = std::move(pts);
  s.label = std::move(label);
  return s;
}

TileShape TileShape::attractor_cloud(PointCloud c, std::string label) {
  if (c.empty()) throw std::invalid_argument("empty cloud shape");
  TileShape s;
  s.kind = Kind::Cloud;
  s.cloud = std::move(c);
  const Box b = bounding_box(s.cloud);
  s.cloud_radius = 2.0 * b.diameter() / std::sqrt(static_cast<double>(s.cloud.size()));
  s.label = std::move(label);
  return s;
}

TileShape TileShape::raster_stencil(RasterField mask, std::string label) {
  TileShape s;
  s.kind = Kind::Stencil;
  s.stencil = std::move(mask);
  s.label = std::move(label);
  return s;
}

Box TileShape::bounds() const {
  switch (kind) {
    case Kind::Interval:
      return Box{{interval_lo}, {interval_hi}};
    case Kind::Box2:
      return box;
    case Kind::Polygon: {
      Box b{{polygon[0][0], polygon[0][1]}, {polygon[0][0], polygon[0][1]}};
      for (const auto& p : polygon) {
        b.lo[0] = std::min(b.lo[0], p[0]);
        b.hi[0] = std::max(b.hi[0], p[0]);
        b.lo[1] = std::min(b.lo[1], p[1]);
        b.hi[1] = std::max(b.hi[1], p[1]);
      }
      return b;
    }
    case Kind::Cloud:
      return bounding_box(cloud);
    case Kind::Stencil:
      return stencil.window;
  }
  throw std::logic_error("unreachable");
}

bool TileShape::contains(const double* x) const {
  switch (kind) {
    case Kind::Interval:
      return x[0] >= interval_lo && x[0] <= interval_hi;
    case Kind::Box2:
      return x[0] >= box.lo[0] && x[0] <= box.hi[0] && x[1] >= box.lo[1] &&
             x[1] <= box.hi[1];
    case Kind::Polygon:
      return point_in_polygon(polygon, x[0], x[1]);
    case Kind::Cloud: {
      auto& slot = cloud_grid_slot(*this);
      if (!slot) slot = std::make_shared<PointGrid>(cloud);
      return slot->nearest_distance(x) <= cloud_radius;
    }
    case Kind::Stencil:
      return stencil.sample(x[0], x[1]) > 0.5;
  }
  throw std::logic_error("unreachable");
}

Box Tiling::support_bounds() const {
  if (tiles.empty()) throw std::invalid_argument("empty tiling has no support");
  Box acc = transformed_bounds(tiles[0].transform, shape_of(tiles[0]).bounds());
  for (std::size_t i = 1; i < tiles.size(); ++i)
    acc = Box::hull(acc, transformed_bounds(tiles[i].transform, shape_of(tiles[i]).bounds()));
  return acc;
}

namespace {

void cut_dfs(const CostFunction& cf, double budget, Word& w, double cost,
             std::vector<Word>& out, std::size_t cap) {
  for (int d = 1; d <= cf.alphabet(); ++d) {
    const double nc = cost + cf.costs[d - 1];
    w.push_back(d);
    if (nc > budget) {
      if (out.size() >= cap)
        throw std::runtime_error("cut set cap exceeded; lower the budget or raise the cap");
      out.push_back(w);
    } else {
      cut_dfs(cf, budget, w, nc, out, cap);
    }
    w.pop_back();
  }
}

}  // namespace

CutSet cut_set(const CostFunction& cf, double budget, std::size_t cap) {
  if (budget < 0.0) throw std::invalid_argument("budget must be >= 0");
  for (double c : cf.costs)
    if (!(c > 0.0)) throw std::invalid_argument("costs must be positive");
  CutSet cs;
  cs.budget = budget;
  Word w;
  // A word whose cost ties the budget exactly stays inside the cut. Summing
  // the same symbol costs in different orders (the budget is one such sum)
  // perturbs ties by an ulp, so resolve the comparison with a small relative
  // slack to keep the cut consistent across nested budgets.
  const double slack = 1e-9 * (1.0 + std::abs(budget));
  cut_dfs(cf, budget + slack, w, 0.0, cs.words, cap);
  return cs;
}

namespace {

struct TransformKey {
  std::vector<std::int64_t> q;
  bool operator==(const TransformKey&) const = default;
};
struct TransformKeyHash {
  std::size_t operator()(const TransformKey& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : k.q) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

TransformKey quantize_transform(const Similitude& s, double step) {
  TransformKey k;
  for (double v : s.linear()) k.q.push_back(std::llround(v / step));
  for (double v : s.translation()) k.q.push_back(std::llround(v / step));
  return k;
}

double translation_spread(const std::vector<Similitude>& xs) {
  double m = 0.0;
  for (const auto& s : xs)
    for (double v : s.translation()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

Tiling tiling_prefix(const IfsSpec& spec, const CostFunction& cf,
                     const TileShape& shape, const Word& prefix,
                     std::size_t cap) {
  check_word(prefix, spec.alphabet());
  if (cf.alphabet() != spec.alphabet())
    throw std::invalid_argument("cost function / alphabet mismatch");

  const double budget = cf(prefix);
  const CutSet cs = cut_set(cf, budget, cap);
  const Similitude base = word_map_inverse(spec, prefix);

  std::vector<Similitude> transforms;
  transforms.reserve(cs.words.size());
  for (const auto& w : cs.words)
    transforms.push_back(compose(base, word_map(spec, w)));

  const double ref = translation_spread(transforms);
  const double step = std::max(kSimilarityTol * (1.0 + ref), 1e-300);

  Tiling t;
  t.shapes.push_back(shape);
  t.address_prefix = prefix;
  t.budget = budget;
  std::unordered_map<TransformKey, std::size_t, TransformKeyHash> seen;
  for (std::size_t i = 0; i < cs.words.size(); ++i) {
    auto key = quantize_transform(transforms[i], step);
    auto [it, inserted] = seen.try_emplace(std::move(key), t.tiles.size());
    if (!inserted &&
        approx_equal(t.tiles[it->second].transform, transforms[i], kSimilarityTol, ref))
      continue;
    t.tiles.push_back(Tile{transforms[i], 0, prefix, cs.words[i], cf(cs.words[i])});
  }
  return t;
}

namespace {

bool transform_subset(const std::vector<Tile>& small,
                      const std::vector<Tile>& big, double tol) {
  double ref = 0.0;
  for (const auto& t : big)
    for (double v : t.transform.translation()) ref = std::max(ref, std::abs(v));
  const double step = std::max(tol * (1.0 + ref), 1e-300);
  std::unordered_map<TransformKey, std::vector<std::size_t>, TransformKeyHash> index;
  for (std::size_t i = 0; i < big.size(); ++i)
    index[quantize_transform(big[i].transform, step)].push_back(i);
  for (const auto& t : small) {
    bool found = false;
    // Check the 3^k quantization neighborhoods would be overkill; a miss in
    // the exact bucket falls back to a linear scan.
    auto it = index.find(quantize_transform(t.transform, step));
    if (it != index.end())
      for (std::size_t i : it->second)
        if (approx_equal(big[i].transform, t.transform, tol, ref)) {
          found = true;
          break;
        }
    if (!found)
      for (const auto& b : big)
        if (approx_equal(b.transform, t.transform, tol, ref)) {
          found = true;
          break;
        }
    if (!found) return false;
  }
  return true;
}

}  // namespace

bool same_transform_set(const std::vector<Tile>& a, const std::vector<Tile>& b,
                        double tol) {
  return transform_subset(a, b, tol) && transform_subset(b, a, tol);
}

std::vector<Tiling> tiling_sequence(const IfsSpec& spec, const CostFunction& cf,
                                    const TileShape& shape, const Address& address,
                                    int k_max, std::size_t cap) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  std::vector<Tiling> out;
  out.reserve(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    out.push_back(tiling_prefix(spec, cf, shape, address.prefix(k), cap));
    if (k > 0 && !transform_subset(out[k - 1].tiles, out[k].tiles, kSimilarityTol))
      throw std::runtime_error("tiling truncations failed to nest");
  }
  return out;
}

namespace {

CostFunction integer_exponent_costs(const IfsSpec& spec) {
  if (!spec.has_integer_exponents())
    throw std::invalid_argument("canonical tilings need integer scale exponents");
  std::vector<double> costs;
  for (double a : spec.exponents()) costs.push_back(std::round(a));
  return CostFunction{std::move(costs)};
}

TileShape default_attractor_shape(const IfsSpec& spec) {
  return TileShape::attractor_cloud(chaos_game(spec, 50000, 50, 0x5eedULL));
}

}  // namespace

Tiling canonical_tiling(const IfsSpec& spec, int k, const TileShape* shape) {
  if (k < 0) throw std::invalid_argument("canonical index must be >= 0");
  const CostFunction cf = integer_exponent_costs(spec);
  const CutSet cs = cut_set(cf, static_cast<double>(k));
  const Similitude blow = Similitude::scaling(spec.dim(), std::pow(spec.base_scale(), -k));

  Tiling t;
  t.shapes.push_back(shape ? *shape : default_attractor_shape(spec));
  t.budget = k;
  for (const auto& w : cs.words)
    t.tiles.push_back(Tile{compose(blow, word_map(spec, w)), 0, {}, w, cf(w)});
  return t;
}

bool canonical_relation_check(const IfsSpec& spec, const Address& address, int k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  const CostFunction cf = integer_exponent_costs(spec);
  const Word prefix = address.prefix(k);
  const double budget = cf(prefix);
  const int c = static_cast<int>(std::llround(budget));

  const TileShape dummy = spec.dim() == 1
                              ? TileShape::interval(0.0, 1.0)
                              : TileShape::box2(Box{{0.0, 0.0}, {1.0, 1.0}});
  const Tiling lhs = tiling_prefix(spec, cf, dummy, prefix);

  const Tiling canonical = canonical_tiling(spec, c, &dummy);
  const Similitude carry =
      compose(word_map_inverse(spec, prefix),
              Similitude::scaling(spec.dim(), std::pow(spec.base_scale(), c)));
  std::vector<Tile> rhs = canonical.tiles;
  for (auto& t : rhs) t.transform = compose(carry, t.transform);

  return same_transform_set(lhs.tiles, rhs);
}

namespace {

struct TileMask {
  int x0 = 0, y0 = 0, w = 0, h = 0;  // pixel rect in the shared grid
  std::vector<std::uint8_t> on, core;  // membership and band-eroded membership
  bool empty = true;
};

// Erode a binary rect mask by `r` pixels (Chebyshev), two-pass min filter.
std::vector<std::uint8_t> erode(const std::vector<std::uint8_t>& in, int w,
                                int h, int r) {
  std::vector<std::uint8_t> tmp(in.size()), out(in.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = 1;
      for (int dx = -r; dx <= r && v; ++dx) {
        const int xx = x + dx;
        v = (xx >= 0 && xx < w) ? in[y * w + xx] : 0;
      }
      tmp[y * w + x] = v;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = 1;
      for (int dy = -r; dy <= r && v; ++dy) {
        const int yy = y + dy;
        v = (yy >= 0 && yy < h) ? tmp[yy * w + x] : 0;
      }
      out[y * w + x] = v;
    }
  return out;
}

}  // namespace

OverlapReport overlap_report(const Tiling& t, int resolution, int band_px) {
  OverlapReport rep;
  if (t.tiles.size() < 2) return rep;

  const bool one_d = t.tiles[0].transform.dim() == 1;
  if (one_d) {
    // Analytic path: every tile is a transformed interval.
    struct Span { double lo, hi; std::size_t idx; };
    std::vector<Span> spans;
    double span_max = 0.0;
    for (std::size_t i = 0; i < t.tiles.size(); ++i) {
      const Box b = transformed_bounds(t.tiles[i].transform, t.shape_of(t.tiles[i]).bounds());
      spans.push_back({b.lo[0], b.hi[0], i});
      span_max = std::max({span_max, std::abs(b.lo[0]), std::abs(b.hi[0])});
    }
    const double tol = kSimilarityTol * (1.0 + span_max);
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < spans.size(); ++i) {
      for (std::size_t j = i + 1; j < spans.size(); ++j) {
        if (spans[j].lo > spans[i].hi + tol) break;
        const double inter = std::min(spans[i].hi, spans[j].hi) - spans[j].lo;
        OverlapReport::Pair p;
        p.a = std::min(spans[i].idx, spans[j].idx);
        p.b = std::max(spans[i].idx, spans[j].idx);
        if (inter > tol) {
          p.kind = OverlapReport::Kind::Overlapping;
          p.measure = inter;
          ++rep.overlapping;
          rep.max_overlap = std::max(rep.max_overlap, inter);
        } else {
          p.kind = OverlapReport::Kind::Touching;
          ++rep.touching;
        }
        rep.pairs.push_back(p);
      }
    }
    return rep;
  }

  // Raster path over the tiling support.
  const Box support = t.support_bounds();
  const double span = std::max(support.extent(0), support.extent(1));
  const double px = span / resolution;
  const int W = std::max(2, static_cast<int>(std::ceil(support.extent(0) / px)));
  const int H = std::max(2, static_cast<int>(std::ceil(support.extent(1) / px)));

  std::vector<TileMask> masks(t.tiles.size());
  for (std::size_t i = 0; i < t.tiles.size(); ++i) {
    const Tile& tile = t.tiles[i];
    const Box tb = transformed_bounds(tile.transform, t.shape_of(tile).bounds());
    TileMask& m = masks[i];
    m.x0 = std::clamp(static_cast<int>((tb.lo[0] - support.lo[0]) / px) - 1, 0, W - 1);
    m.y0 = std::clamp(static_cast<int>((tb.lo[1] - support.lo[1]) / px) - 1, 0, H - 1);
    const int x1 = std::clamp(static_cast<int>((tb.hi[0] - support.lo[0]) / px) + 1, 0, W - 1);
    const int y1 = std::clamp(static_cast<int>((tb.hi[1] - support.lo[1]) / px) + 1, 0, H - 1);
    m.w = x1 - m.x0 + 1;
    m.h = y1 - m.y0 + 1;
    m.on.assign(static_cast<std::size_t>(m.w) * m.h, 0);
    const Similitude inv = invert(tile.transform);
    const TileShape& shape = t.shape_of(tile);
    double q[2];
    for (int y = 0; y < m.h; ++y) {
      const double cy = support.lo[1] + (m.y0 + y + 0.5) * px;
      for (int x = 0; x < m.w; ++x) {
        const double cx = support.lo[0] + (m.x0 + x + 0.5) * px;
        const double p[2] = {cx, cy};
        inv.apply_inplace(p, q);
        if (shape.contains(q)) {
          m.on[static_cast<std::size_t>(y) * m.w + x] = 1;
          m.empty = false;
        }
      }
    }
    m.core = erode(m.on, m.w, m.h, band_px);
  }

  for (std::size_t i = 0; i < t.tiles.size(); ++i) {
    if (masks[i].empty) continue;
    for (std::size_t j = i + 1; j < t.tiles.size(); ++j) {
      if (masks[j].empty) continue;
      const TileMask& a = masks[i];
      const TileMask& b = masks[j];
      const int x0 = std::max(a.x0, b.x0), x1 = std::min(a.x0 + a.w, b.x0 + b.w) - 1;
      const int y0 = std::max(a.y0, b.y0), y1 = std::min(a.y0 + a.h, b.y0 + b.h) - 1;
      if (x0 > x1 || y0 > y1) continue;
      std::size_t shared = 0, deep = 0;
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          const std::size_t ia = static_cast<std::size_t>(y - a.y0) * a.w + (x - a.x0);
          const std::size_t ib = static_cast<std::size_t>(y - b.y0) * b.w + (x - b.x0);
          if (a.on[ia] && b.on[ib]) {
            ++shared;
            if (a.core[ia] && b.core[ib]) ++deep;
          }
        }
      if (shared == 0) continue;
      OverlapReport::Pair p;
      p.a = i;
      p.b = j;
      p.measure = static_cast<double>(shared) * px * px;
      if (deep > 0) {
        p.kind = OverlapReport::Kind::Overlapping;
        ++rep.overlapping;
        rep.max_overlap = std::max(rep.max_overlap, p.measure);
      } else {
        p.kind = OverlapReport::Kind::Touching;
        ++rep.touching;
      }
      rep.pairs.push_back(p);
    }
  }
  return rep;
}

std::optional<Similitude> shift_equivalence_check(
    const IfsSpec& spec, const CostFunction& cf, const TileShape& shape,
    const Address& i, const Address& j, int p, int q, int k_max,
    std::size_t cap) {
  if (p < 0 || q < 0 || k_max < 0) throw std::invalid_argument("bad p/q/k_max");
  if (!(i.shifted(p) == j.shifted(q)))
    throw std::invalid_argument("shifted addresses differ: sigma^p i != sigma^q j");
  const Word ip = i.prefix(p), jq = j.prefix(q);
  if (std::abs(cf(ip) - cf(jq)) > 1e-12 * (1.0 + cf(ip)))
    throw std::invalid_argument("prefix costs differ: c(i|p) != c(j|q)");
  const auto exps = spec.exponents();
  for (int d = 0; d < spec.alphabet(); ++d)
    if (std::abs(cf.costs[d] - exps[d]) > kSimilarityTol)
      throw std::invalid_argument("costs must equal the scale exponents");

  // E = f_{i1}^{-1} ... f_{ip}^{-1} f_{jq} ... f_{j1}.
  Word jq_rev(jq.rbegin(), jq.rend());
  const Similitude e = compose(word_map_inverse(spec, ip), word_map(spec, jq_rev));

  for (int r = 0; r <= k_max; ++r) {
    const Tiling lhs = tiling_prefix(spec, cf, shape, i.prefix(p + r), cap);
    Tiling rhs = tiling_prefix(spec, cf, shape, j.prefix(q + r), cap);
    for (auto& t : rhs.tiles) t.transform = compose(e, t.transform);
    if (!same_transform_set(lhs.tiles, rhs.tiles)) return std::nullopt;
  }
  return e;
}

Commensurability commensurability(const Tiling& t) {
  if (t.tiles.size() < 2)
    throw std::invalid_argument("commensurability needs >= 2 tiles");

  std::vector<double> logs;
  for (const auto& tile : t.tiles) logs.push_back(std::log(tile.transform.ratio()));
  std::sort(logs.begin(), logs.end());
  std::vector<double> distinct;
  for (double l : logs)
    if (distinct.empty() || std::abs(l - distinct.back()) > 1e-9 * (1.0 + std::abs(l)))
      distinct.push_back(l);

  Commensurability out;
  out.distinct_scales = distinct.size();
  if (distinct.size() == 1) {
    out.commensurate = true;
    out.ratio = std::exp(distinct[0]);
    return out;
  }

  std::vector<double> diffs;
  double max_diff = 0.0;
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    diffs.push_back(distinct[i] - distinct[0]);
    max_diff = std::max(max_diff, diffs.back());
  }

  // Real gcd with a floor: genuinely incommensurate scale logs drive the
  // candidate generator to zero.
  const double floor = 1e-6 * max_diff;
  double g = diffs[0];
  for (double d : diffs) {
    double a = std::max(g, d), b = std::min(g, d);
    while (b > floor) {
      const double r = std::abs(a - std::round(a / b) * b);
      a = b;
      b = r;
    }
    g = a;
    if (g <= floor) break;
  }
  if (g <= floor) {
    out.commensurate = false;
    return out;
  }
  for (double d : diffs) {
    const double n = std::round(d / g);
    if (std::abs(d - n * g) > 1e-9 * (1.0 + max_diff)) {
      out.commensurate = false;
      return out;
    }
  }
  out.commensurate = true;
  out.ratio = std::exp(-g);
  return out;
}

Tiling patch(const Tiling& t, const Box& window) {
  Tiling out;
  out.shapes = t.shapes;
  out.address_prefix = t.address_prefix;
  out.budget = t.budget;
  for (const auto& tile : t.tiles) {
    const TileShape& shape = t.shape_of(tile);
    const Box tb = transformed_bounds(tile.transform, shape.bounds());
    const double tol = kSimilarityTol * (1.0 + tb.diameter());
    if (!tb.inflated(tol).intersects(window)) continue;

    if (shape.kind == TileShape::Kind::Interval) {
      // Exact in 1-d.
      if (std::min(tb.hi[0], window.hi[0]) >= std::max(tb.lo[0], window.lo[0]) - tol)
        out.tiles.push_back(tile);
      continue;
    }
    // Refine the bbox test by sampling the intersection region.
    Box region{{std::max(tb.lo[0], window.lo[0]), std::max(tb.lo[1], window.lo[1])},
               {std::min(tb.hi[0], window.hi[0]), std::min(tb.hi[1], window.hi[1])}};
    const Similitude inv = invert(tile.transform);
    bool hit = false;
    constexpr int kSamples = 32;
    double qp[2];
    for (int y = 0; y < kSamples && !hit; ++y)
      for (int x = 0; x < kSamples && !hit; ++x) {
        const double p[2] = {
            region.lo[0] + (x + 0.5) / kSamples * (region.hi[0] - region.lo[0]),
            region.lo[1] + (y + 0.5) / kSamples * (region.hi[1] - region.lo[1])};
        inv.apply_inplace(p, qp);
        hit = shape.contains(qp);
      }
    if (hit) out.tiles.push_back(tile);
  }
  return out;
}

void rasterize_tile(const Tiling& t, std::size_t index, RasterField& field) {
  const Tile& tile = t.tiles[index];
  const TileShape& shape = t.shape_of(tile);
  const bool one_d = tile.transform.dim() == 1;
  const Box tb = transformed_bounds(tile.transform, shape.bounds());
  const Similitude inv = invert(tile.transform);

  const double pw = field.pixel_w(), ph = field.pixel_h();
  const int x0 = std::max(0, static_cast<int>((tb.lo[0] - field.window.lo[0]) / pw) - 1);
  const int x1 = std::min(field.width - 1, static_cast<int>((tb.hi[0] - field.window.lo[0]) / pw) + 1);
  int y0 = 0, y1 = field.height - 1;
  if (!one_d) {
    y0 = std::max(0, static_cast<int>((tb.lo[1] - field.window.lo[1]) / ph) - 1);
    y1 = std::min(field.height - 1, static_cast<int>((tb.hi[1] - field.window.lo[1]) / ph) + 1);
  }
  double q[2];
  for (int iy = y0; iy <= y1; ++iy) {
    const double cy = field.window.lo[1] + (iy + 0.5) * ph;
    for (int ix = x0; ix <= x1; ++ix) {
      const double cx = field.window.lo[0] + (ix + 0.5) * pw;
      if (one_d) {
        const double p1 = cx;
        inv.apply_inplace(&p1, q);
      } else {
        const double p[2] = {cx, cy};
        inv.apply_inplace(p, q);
      }
      if (shape.contains(q)) field.at(ix, iy) = 1.0;
    }
  }
}

double coverage_fraction(const Tiling& t, const Box& window, int resolution) {
  if (t.tiles.empty()) return 0.0;
  const bool one_d = t.tiles[0].transform.dim() == 1;
  Box w2 = window;
  if (window.dim() == 1) {
    const double eps = window.extent(0) / resolution;
    w2 = Box{{window.lo[0], -eps}, {window.hi[0], eps}};
  }
  const int W = resolution;
  const int H = one_d ? 2
                      : std::max(2, static_cast<int>(std::lround(
                                        resolution * w2.extent(1) / w2.extent(0))));
  RasterField cov = RasterField::zeros(w2, W, H);
  for (std::size_t i = 0; i < t.tiles.size(); ++i) rasterize_tile(t, i, cov);
  return static_cast<double>(cov.count_where(0.5)) / cov.samples.size();
}

void write_json(const Tiling& t, const std::string& path) {
  nlohmann::json doc;
  auto& shapes = doc["shape_table"] = nlohmann::json::array();
  for (const auto& s : t.shapes) {
    nlohmann::json e;
    switch (s.kind) {
      case TileShape::Kind::Interval:
        e["kind"] = "interval";
        e["lo"] = s.interval_lo;
        e["hi"] = s.interval_hi;
        break;
      case TileShape::Kind::Box2:
        e["kind"] = "box";
        e["lo"] = s.box.lo;
        e["hi"] = s.box.hi;
        break;
      case TileShape::Kind::Polygon:
        e["kind"] = "polygon";
        e["points"] = s.polygon;
        break;
      case TileShape::Kind::Cloud:
        e["kind"] = "attractor-cloud";
        e["points"] = s.cloud.size();
        break;
      case TileShape::Kind::Stencil:
        e["kind"] = "central-set-stencil";
        e["resolution"] = {s.stencil.width, s.stencil.height};
        break;
    }
    e["label"] = s.label;
    shapes.push_back(std::move(e));
  }
  doc["address_prefix"] = word_to_string(t.address_prefix);
  doc["budget"] = t.budget;
  auto& tiles = doc["tiles"] = nlohmann::json::array();
  for (const auto& tile : t.tiles) {
    nlohmann::json e;
    e["m"] = tile.transform.linear();
    e["t"] = tile.transform.translation();
    e["word_i"] = word_to_string(tile.word_i);
    e["word_j"] = word_to_string(tile.word_j);
    e["cost"] = tile.cost;
    e["scale"] = tile.transform.ratio();
    e["shape"] = tile.shape_ref;
    tiles.push_back(std::move(e));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << doc.dump(2) << '\n';
}

void write_csv(const Tiling& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  for (const auto& tile : t.tiles) {
    const auto& m = tile.transform.linear();
    const auto& tr = tile.transform.translation();
    if (tile.transform.dim() == 1) {
      out << m[0] << ',' << tr[0];
    } else {
      // 2x3 layout: a, b, e, c, d, g.
      out << m[0] << ',' << m[1] << ',' << tr[0] << ',' << m[2] << ',' << m[3]
          << ',' << tr[1];
    }
    out << ',' << word_to_string(tile.word_i) << ',' << word_to_string(tile.word_j)
        << '\n';
  }
}

}  // namespace ifstile
