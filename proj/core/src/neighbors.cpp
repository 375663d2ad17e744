#include "ifstile/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace ifstile {

namespace {

Box estimate_attractor_box(const IfsSpec& spec) {
  // Deterministic internal estimate; callers wanting precision pass their own.
  return bounding_box(chaos_game(spec, 20000, 50, 0x5eedULL));
}

// Quantized coefficient key; collisions are re-checked exactly by the caller.
struct MapKey {
  std::vector<std::int64_t> q;
  bool operator==(const MapKey&) const = default;
};

struct MapKeyHash {
  std::size_t operator()(const MapKey& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : k.q) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

MapKey quantize(const Similitude& s, double step) {
  MapKey k;
  k.q.reserve(s.linear().size() + s.translation().size());
  for (double v : s.linear()) k.q.push_back(std::llround(v / step));
  for (double v : s.translation()) k.q.push_back(std::llround(v / step));
  return k;
}

}  // namespace

NeighborSet enumerate_neighbors(const IfsSpec& spec, int depth,
                                const NeighborOptions& options) {
  if (depth < 1) throw std::invalid_argument("neighbor depth must be >= 1");

  const Box abox = options.attractor_box ? *options.attractor_box
                                         : estimate_attractor_box(spec);
  const double diam = abox.diameter();
  const Vec acenter = abox.center();
  const double aradius = 0.5 * diam;

  NeighborSet out;
  out.depth = depth;
  out.dedup_tol = options.dedup_tol;
  out.scale_ref = diam;
  const double tol = options.dedup_tol * (1.0 + diam);
  const double step = std::max(tol, 1e-300);

  // All words of length 1..depth, grouped with their maps and inverses.
  std::vector<Word> words;
  {
    const int m = spec.alphabet();
    std::vector<Word> frontier;
    for (int d = 1; d <= m; ++d) frontier.push_back({d});
    for (int len = 1; len <= depth; ++len) {
      std::vector<Word> next;
      for (auto& f : frontier) {
        words.push_back(f);
        if (len < depth)
          for (int d = 1; d <= m; ++d) next.push_back(concat(f, {d}));
      }
      frontier = std::move(next);
    }
  }
  std::vector<Similitude> fwd, inv;
  fwd.reserve(words.size());
  inv.reserve(words.size());
  for (const auto& w : words) {
    fwd.push_back(word_map(spec, w));
    inv.push_back(invert(fwd.back()));
  }

  std::unordered_map<MapKey, std::size_t, MapKeyHash> seen;
  for (std::size_t a = 0; a < words.size(); ++a) {
    for (std::size_t b = 0; b < words.size(); ++b) {
      if (words[a][0] == words[b][0]) continue;
      Similitude h = compose(inv[a], fwd[b]);
      if (h.is_identity(tol)) continue;
      if (options.prune_box) {
        // h maps the attractor ball to a ball; drop it if that ball cannot
        // touch the pruning box.
        const Vec hc = h.apply(acenter);
        const double hr = h.ratio() * aradius;
        if (options.prune_box->distance(hc) > hr) continue;
      }
      MapKey key = quantize(h, step);
      auto [it, inserted] = seen.try_emplace(std::move(key), out.maps.size());
      if (!inserted) {
        if (approx_equal(out.maps[it->second].map, h, options.dedup_tol, diam))
          continue;
        // Quantization collision with a genuinely different map: fall back to
        // a linear re-check against everything.
        bool dup = false;
        for (const auto& nm : out.maps)
          if (approx_equal(nm.map, h, options.dedup_tol, diam)) {
            dup = true;
            break;
          }
        if (dup) continue;
      }
      out.maps.push_back(NeighborMap{std::move(h), words[a], words[b]});
    }
  }
  return out;
}

double displacement_norm(const Similitude& h, const Box& box) {
  const int n = h.dim();
  double best = 0.0;
  // Affine displacement h(x) - x attains its norm at a box vertex.
  const int corners = 1 << n;
  Vec x(n), y(n);
  for (int mask = 0; mask < corners; ++mask) {
    for (int d = 0; d < n; ++d) x[d] = (mask >> d & 1) ? box.hi[d] : box.lo[d];
    h.apply_inplace(x.data(), y.data());
    double d2 = 0.0;
    for (int d = 0; d < n; ++d) d2 += (y[d] - x[d]) * (y[d] - x[d]);
    best = std::max(best, d2);
  }
  return std::sqrt(best);
}

double kappa_estimate(const NeighborSet& ns, const Box& reference_ball,
                      std::size_t* achieved) {
  if (ns.maps.empty()) throw std::invalid_argument("empty neighbor set");
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ns.maps.size(); ++i) {
    const double d = displacement_norm(ns.maps[i].map, reference_ball);
    if (d < best) {
      best = d;
      arg = i;
    }
  }
  if (achieved) *achieved = arg;
  return best;
}

PointCloud fast_basin_slice(const IfsSpec& spec, const PointCloud& attractor,
                            int depth, double cutoff, std::size_t max_points) {
  if (attractor.empty()) throw std::invalid_argument("empty attractor cloud");

  const Box abox = bounding_box(attractor);
  NeighborOptions opts;
  opts.attractor_box = abox;
  opts.prune_box = abox.inflated(cutoff);
  const NeighborSet ns = enumerate_neighbors(spec, depth, opts);

  PointCloud out;
  out.dim = attractor.dim;
  out.seed = attractor.seed;
  if (cutoff <= 0.0 || ns.maps.empty()) return out;

  // Deterministic stride keeps the total near max_points.
  const std::size_t total = ns.maps.size() * attractor.size();
  const std::size_t stride = std::max<std::size_t>(1, total / max_points);

  const int n = attractor.dim;
  Vec y(n);
  for (const auto& nm : ns.maps) {
    for (std::size_t i = 0; i < attractor.size(); i += stride) {
      nm.map.apply_inplace(attractor.point(i), y.data());
      if (abox.distance(y) <= cutoff) out.push(y.data());
    }
  }
  return out;
}

void write_json(const NeighborSet& ns, const std::string& path) {
  nlohmann::json doc;
  doc["depth"] = ns.depth;
  doc["dedup_tol"] = ns.dedup_tol;
  doc["count"] = ns.maps.size();
  auto& arr = doc["maps"] = nlohmann::json::array();
  for (const auto& nm : ns.maps) {
    nlohmann::json entry;
    entry["matrix"] = nm.map.linear();
    entry["translation"] = nm.map.translation();
    entry["lambda"] = nm.map.ratio();
    entry["word_i"] = word_to_string(nm.word_i);
    entry["word_j"] = word_to_string(nm.word_j);
    arr.push_back(std::move(entry));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace ifstile
