#pragma once

// JSON system files: {name, dimension, maps: [{matrix, translation, cost}],
// tile, similarity_tolerance}. Matrices are nested row arrays ([[a, b],
// [c, d]]; 1-d systems use [[a]]); the affine map is (x, y) |-> (ax + by + e,
// cx + dy + g) with translation [e, g].

#include <optional>
#include <string>
#include <vector>

#include "ifstile/geometry.hpp"
#include "ifstile/tiling.hpp"

namespace ifstile {

struct LoadedSpec {
  IfsSpec spec;
  /// Optional "tile" entry (interval / box / polygon) for tiling commands.
  std::optional<TileShape> tile;
  double similarity_tolerance = kSimilarityTol;
};

/// Costs are optional in the file (defaulting to the scale exponents, rounded
/// to integers when within 1e-6); `force_costs` overrides both.
LoadedSpec load_spec_file(const std::string& path,
                          const std::optional<std::vector<double>>& force_costs =
                              std::nullopt);

/// Same, from JSON text (for tests and embedded specs).
LoadedSpec parse_spec_json(const std::string& text,
                           const std::optional<std::vector<double>>& force_costs =
                               std::nullopt);

void save_spec_file(const IfsSpec& spec, const std::string& path);

}  // namespace ifstile
