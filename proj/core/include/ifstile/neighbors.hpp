#pragma once

// Neighbor maps h = f_i^{-1} f_j (differing first digits), the separation
// constant kappa, and the near-attractor slice of the fast basin H.

#include <optional>
#include <string>
#include <vector>

#include "ifstile/attractor.hpp"
#include "ifstile/geometry.hpp"

namespace ifstile {

struct NeighborMap {
  Similitude map;
  Word word_i, word_j;  // provenance: map = invert(f_word_i) o f_word_j
};

struct NeighborSet {
  std::vector<NeighborMap> maps;  // deduplicated, identity excluded
  int depth = 0;
  double dedup_tol = kSimilarityTol;
  double scale_ref = 0.0;  // attractor diameter used for dedup/pruning
};

struct NeighborOptions {
  double dedup_tol = kSimilarityTol;
  /// When set, maps whose image of the attractor bounding ball lies entirely
  /// outside this box are dropped; they cannot affect d(x, H) near A.
  std::optional<Box> prune_box;
  /// Attractor bounding box (estimated internally when absent).
  std::optional<Box> attractor_box;
};

/// All pairs (i, j) with 1 <= |i|, |j| <= depth and i1 != j1, deduplicated.
NeighborSet enumerate_neighbors(const IfsSpec& spec, int depth,
                                const NeighborOptions& options = {});

/// kappa = min over maps h of sup_{x in ball} |h(x) - x|; for an affine h the
/// supremum over a box is attained at a vertex and evaluated exactly.
/// `achieved` (if non-null) receives the index of the minimizing map.
double kappa_estimate(const NeighborSet& ns, const Box& reference_ball,
                      std::size_t* achieved = nullptr);

/// sup_{x in box} |h(x) - x|, exact (affine displacement is affine).
double displacement_norm(const Similitude& h, const Box& box);

/// Union of h(attractor) over the neighbor maps, keeping only points within
/// `cutoff` of the attractor bounding box. `max_points` caps the output by
/// deterministic striding over the input cloud.
PointCloud fast_basin_slice(const IfsSpec& spec, const PointCloud& attractor,
                            int depth, double cutoff,
                            std::size_t max_points = 4000000);

void write_json(const NeighborSet& ns, const std::string& path);

}  // namespace ifstile
