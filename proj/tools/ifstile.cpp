// ifstile: command-line driver for attractors, neighbor maps, central open
// sets, and cost-function tilings of iterated function systems.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ifstile/attractor.hpp"
#include "ifstile/centralset.hpp"
#include "ifstile/geometry.hpp"
#include "ifstile/neighbors.hpp"
#include "ifstile/render.hpp"
#include "ifstile/specfile.hpp"
#include "ifstile/tiling.hpp"

namespace {

using namespace ifstile;

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

Box parse_window(const std::string& csv) {
  const auto v = parse_doubles(csv);
  if (v.size() == 2) return Box{{v[0]}, {v[1]}};
  if (v.size() == 4) return Box{{v[0], v[1]}, {v[2], v[3]}};
  throw std::runtime_error("--window wants x0,x1 (1-d) or x0,y0,x1,y1 (2-d)");
}

struct Common {
  std::string spec_path;
  std::string force_costs;

  LoadedSpec load() const {
    std::optional<std::vector<double>> costs;
    if (!force_costs.empty()) costs = parse_doubles(force_costs);
    return load_spec_file(spec_path, costs);
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("spec", c.spec_path, "IFS spec file (JSON)")->required();
  cmd->add_option("--force-costs", c.force_costs,
                  "comma-separated per-map costs overriding the file");
}

TileShape resolve_tile_shape(const std::string& choice, const LoadedSpec& ls,
                             int centralset_grid, int centralset_depth,
                             std::uint64_t seed) {
  if (choice == "attractor" || choice.empty()) {
    if (ls.tile) return *ls.tile;
    return TileShape::attractor_cloud(chaos_game(ls.spec, 50000, 50, seed));
  }
  if (choice == "central") {
    CentralSetParams p;
    p.resolution = centralset_grid;
    p.neighbor_depth = centralset_depth;
    p.seed = seed;
    const CentralSetEstimate c = estimate_central_set(ls.spec, p);
    if (!c.osc_evidence)
      throw std::runtime_error("central set estimate is empty; cannot tile with it");
    return tile_shape_from_mask(c);
  }
  if (choice.rfind("box:", 0) == 0) {
    const auto v = parse_doubles(choice.substr(4));
    if (v.size() != 4) throw std::runtime_error("box tile wants x0,y0,x1,y1");
    return TileShape::box2(Box{{v[0], v[1]}, {v[2], v[3]}});
  }
  if (choice.rfind("interval:", 0) == 0) {
    const auto v = parse_doubles(choice.substr(9));
    if (v.size() != 2) throw std::runtime_error("interval tile wants lo,hi");
    return TileShape::interval(v[0], v[1]);
  }
  if (choice.rfind("polygon:", 0) == 0) {
    std::ifstream in(choice.substr(8));
    if (!in) throw std::runtime_error("cannot open polygon file " + choice.substr(8));
    std::vector<std::array<double, 2>> pts;
    double x, y;
    char comma;
    while (in >> x >> comma >> y) pts.push_back({x, y});
    return TileShape::simple_polygon(std::move(pts));
  }
  throw std::runtime_error("unknown tile kind: " + choice);
}

Scene scene_for(const Tiling& t, const std::optional<Box>& window, int width) {
  Scene sc;
  sc.layers.push_back(Layer::of(t));
  Box b = window ? *window : t.support_bounds();
  if (b.dim() == 1) {
    const double pad = 0.12 * b.extent(0);
    b = Box{{b.lo[0], -pad}, {b.hi[0], pad}};
  }
  sc.viewport = b;
  sc.width = width;
  return sc;
}

int cmd_attractor(const Common& c, std::size_t points, std::size_t burn_in,
                  std::uint64_t seed, const std::string& out,
                  const std::string& raster, const std::string& window_csv,
                  int depth, const std::string& out_pgm) {
  const LoadedSpec ls = c.load();
  const PointCloud cloud = chaos_game(ls.spec, points, burn_in, seed);
  if (!out.empty()) write_csv(cloud, out);
  if (!raster.empty() || !out_pgm.empty()) {
    int w = 512, h = 512;
    if (!raster.empty() &&
        std::sscanf(raster.c_str(), "%dx%d", &w, &h) != 2)
      throw std::runtime_error("--raster wants WxH");
    Box window{{}, {}};
    if (!window_csv.empty()) {
      window = parse_window(window_csv);
      if (window.dim() == 1) {
        const double ph = window.extent(0) / w * h / 2.0;
        window = Box{{window.lo[0], -ph}, {window.hi[0], ph}};
      }
    } else {
      Box ab = bounding_box(cloud);
      if (ab.dim() == 1) ab = Box{{ab.lo[0], -0.05}, {ab.hi[0], 0.05}};
      window = ab.inflated(0.05 * ab.diameter());
    }
    const RasterField mask = attractor_mask(ls.spec, window, w, h, depth);
    write_pgm(mask, out_pgm.empty() ? out + ".pgm" : out_pgm, true, true);
  }
  std::cout << "points " << cloud.size() << "\n";
  return 0;
}

int cmd_dimension(const Common& c) {
  const LoadedSpec ls = c.load();
  std::cout.precision(15);
  std::cout << moran_dimension(ls.spec.ratios()) << "\n";
  return 0;
}

int cmd_neighbors(const Common& c, int depth, double cutoff,
                  const std::string& out) {
  const LoadedSpec ls = c.load();
  NeighborOptions opts;
  if (cutoff >= 0.0) {
    const Box ab = bounding_box(chaos_game(ls.spec, 20000, 50, 0x5eedULL));
    opts.attractor_box = ab;
    opts.prune_box = ab.inflated(cutoff);
  }
  const NeighborSet ns = enumerate_neighbors(ls.spec, depth, opts);
  if (!out.empty()) write_json(ns, out);
  std::cout << "neighbor maps " << ns.maps.size() << "\n";
  return 0;
}

int cmd_centralset(const Common& c, int grid, int depth, std::size_t points,
                   std::uint64_t seed, const std::string& window_csv,
                   const std::string& out_mask, const std::string& out_boundary,
                   bool circles) {
  const LoadedSpec ls = c.load();
  CentralSetParams p;
  p.resolution = grid;
  p.neighbor_depth = depth;
  p.cloud_size = points;
  p.seed = seed;
  if (!window_csv.empty()) p.window = parse_window(window_csv);
  const CentralSetEstimate est = estimate_central_set(ls.spec, p);

  if (!est.osc_evidence)
    std::cerr << "warning: empty central set estimate; the open set condition "
                 "appears to fail\n";
  if (est.unbounded_suspected)
    std::cerr << "note: mask touches the window edge; the central set may be "
                 "unbounded (clipped to window)\n";

  if (!out_mask.empty()) write_pgm(est.mask, out_mask, true, true);
  if (!out_boundary.empty() && est.osc_evidence) {
    const BoundaryCurve b = extract_boundary(est);
    write_csv(b, out_boundary + ".csv");
    write_svg(b, est.mask.window, out_boundary + ".svg");
    if (circles) {
      const auto cs = touching_circles(est, b);
      std::ofstream out(out_boundary + ".circles.csv", std::ios::binary);
      out.precision(17);
      for (const auto& e : cs) out << e[0] << ',' << e[1] << ',' << e[2] << '\n';
    }
  }
  std::cout << "mask pixels " << est.on_pixels() << " area " << est.area()
            << "\n";
  return 0;
}

int cmd_tile(const Common& c, const std::string& address_text, int k,
             const std::string& tile_choice, const std::string& out_json,
             const std::string& out_csv, const std::string& out_svg,
             const std::string& window_csv, int width) {
  const LoadedSpec ls = c.load();
  const Address addr = parse_address(address_text, ls.spec.alphabet());
  const TileShape shape = resolve_tile_shape(tile_choice, ls, 512, 4, 0x5eedULL);
  const Tiling t = tiling_prefix(ls.spec, ls.spec.cost_function(), shape,
                                 addr.prefix(k));
  std::optional<Box> window;
  if (!window_csv.empty()) window = parse_window(window_csv);
  const Tiling& final_t = t;
  if (!out_json.empty()) write_json(final_t, out_json);
  if (!out_csv.empty()) write_csv(final_t, out_csv);
  if (!out_svg.empty()) render_svg(scene_for(final_t, window, width), out_svg);
  std::cout << "tiles " << t.tiles.size() << " budget " << t.budget << "\n";
  return 0;
}

int cmd_canonical(const Common& c, int k, const std::string& out_json,
                  const std::string& out_svg, int width) {
  const LoadedSpec ls = c.load();
  const Tiling t = canonical_tiling(ls.spec, k);
  if (!out_json.empty()) write_json(t, out_json);
  if (!out_svg.empty()) render_svg(scene_for(t, std::nullopt, width), out_svg);
  std::cout << "tiles " << t.tiles.size() << "\n";
  return 0;
}

int cmd_check(const Common& c, const std::string& suite,
              const std::string& address_text, const std::string& address2_text,
              int k, int p, int q, int grid) {
  const LoadedSpec ls = c.load();
  const IfsSpec& spec = ls.spec;
  const CostFunction cf = spec.cost_function();
  const int m = spec.alphabet();

  const TileShape shape =
      ls.tile ? *ls.tile
              : (spec.dim() == 1
                     ? TileShape::interval(0.0, 1.0)
                     : TileShape::attractor_cloud(chaos_game(spec, 50000, 50, 0x5eedULL)));

  auto verdict = [&](bool ok, const std::string& detail) {
    std::cout << suite << ": " << (ok ? "pass" : "FAIL") << " " << detail << "\n";
    return ok ? 0 : 1;
  };

  if (suite == "nesting") {
    const Address addr = parse_address(
        address_text.empty() ? "(1)" : address_text, m);
    try {
      const auto seq = tiling_sequence(spec, cf, shape, addr, k > 0 ? k : 4);
      return verdict(true, "k=0.." + std::to_string(seq.size() - 1));
    } catch (const std::exception& e) {
      return verdict(false, e.what());
    }
  }
  if (suite == "overlap") {
    const Address addr = parse_address(
        address_text.empty() ? "(1)" : address_text, m);
    const Tiling t = tiling_prefix(spec, cf, shape, addr.prefix(k > 0 ? k : 3));
    const OverlapReport rep = overlap_report(t, grid);
    std::ostringstream d;
    d << "touching=" << rep.touching << " overlapping=" << rep.overlapping
      << " max_overlap=" << rep.max_overlap;
    std::cout << suite << ": " << d.str() << "\n";
    return 0;  // report-only
  }
  if (suite == "feasibility") {
    CentralSetParams params;
    params.resolution = grid;
    const CentralSetEstimate est = estimate_central_set(spec, params);
    const FeasibilityReport rep = feasibility_check(spec, est);
    std::ostringstream d;
    d << "osc_evidence=" << (rep.osc_evidence ? "yes" : "fails")
      << " overlap_pairs=" << rep.overlaps.size();
    return verdict(rep.pass, d.str());
  }
  if (suite == "shift-equivalence") {
    const Address i = parse_address(address_text, m);
    const Address j = parse_address(address2_text, m);
    const auto e = shift_equivalence_check(spec, cf, shape, i, j, p, q,
                                           k > 0 ? k : 4);
    return verdict(e.has_value(), e ? "E found" : "transform sets differ");
  }
  if (suite == "canonical-relation") {
    const Address addr = parse_address(
        address_text.empty() ? "(1)" : address_text, m);
    bool ok = true;
    for (int kk = 0; kk <= (k > 0 ? k : 4) && ok; ++kk)
      ok = canonical_relation_check(spec, addr, kk);
    return verdict(ok, "k<=" + std::to_string(k > 0 ? k : 4));
  }
  if (suite == "commensurability") {
    const Tiling t =
        spec.has_integer_exponents()
            ? canonical_tiling(spec, k > 0 ? k : 4)
            : tiling_prefix(spec, cf, shape,
                            parse_address(address_text.empty() ? "(1)" : address_text, m)
                                .prefix(k > 0 ? k : 4));
    const Commensurability cm = commensurability(t);
    std::ostringstream d;
    if (cm.commensurate)
      d << "commensurate ratio=" << cm.ratio;
    else
      d << "incommensurate distinct_scales=" << cm.distinct_scales;
    std::cout << suite << ": " << d.str() << "\n";
    return 0;  // report-only
  }
  throw CLI::ValidationError("--suite", "unknown suite " + suite);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IFS attractors, central open sets, and cost-function tilings"};
  app.require_subcommand(1);

  Common c_attr, c_dim, c_nbr, c_cs, c_tile, c_canon, c_check;

  // attractor
  auto* attractor = app.add_subcommand("attractor", "chaos-game cloud / raster mask");
  add_common(attractor, c_attr);
  std::size_t points = 100000, burn_in = 100;
  std::uint64_t seed = 1;
  std::string out, raster, window_csv, out_pgm;
  int mask_depth = 8;
  attractor->add_option("--points", points);
  attractor->add_option("--burn-in", burn_in);
  attractor->add_option("--seed", seed);
  attractor->add_option("--out", out, "CSV point output");
  attractor->add_option("--raster", raster, "WxH deterministic mask");
  attractor->add_option("--window", window_csv);
  attractor->add_option("--depth", mask_depth, "mask recursion depth");
  attractor->add_option("--out-pgm", out_pgm);

  // dimension
  auto* dimension = app.add_subcommand("dimension", "Moran similarity dimension");
  add_common(dimension, c_dim);

  // neighbors
  auto* neighbors = app.add_subcommand("neighbors", "neighbor maps f_i^-1 f_j");
  add_common(neighbors, c_nbr);
  int nbr_depth = 4;
  double cutoff = -1.0;
  std::string nbr_out;
  neighbors->add_option("--depth", nbr_depth)->check(CLI::PositiveNumber);
  neighbors->add_option("--cutoff", cutoff, "prune maps far from the attractor");
  neighbors->add_option("--out", nbr_out, "JSON output");

  // centralset
  auto* centralset = app.add_subcommand("centralset", "estimate the central open set");
  add_common(centralset, c_cs);
  int grid = 1024, cs_depth = 4;
  std::size_t cs_points = 200000;
  std::uint64_t cs_seed = 0xce17a15e7ULL;
  std::string cs_window, out_mask, out_boundary;
  bool circles = false;
  centralset->add_option("--grid", grid);
  centralset->add_option("--depth", cs_depth);
  centralset->add_option("--points", cs_points);
  centralset->add_option("--seed", cs_seed);
  centralset->add_option("--window", cs_window);
  centralset->add_option("--out-mask", out_mask);
  centralset->add_option("--out-boundary", out_boundary);
  centralset->add_flag("--circles", circles, "emit touching-circle samples");

  // tile
  auto* tile = app.add_subcommand("tile", "cost-function tiling for an address prefix");
  add_common(tile, c_tile);
  std::string address_text = "(1)", tile_choice = "attractor", t_json, t_csv,
              t_svg, t_window;
  int t_k = 3, t_width = 1024;
  tile->add_option("--address", address_text, "e.g. \"12(21)\"");
  tile->add_option("--k", t_k, "prefix length");
  tile->add_option("--tile", tile_choice,
                   "attractor | central | box:x0,y0,x1,y1 | interval:lo,hi | polygon:file");
  tile->add_option("--out-json", t_json);
  tile->add_option("--out-csv", t_csv);
  tile->add_option("--out-svg", t_svg);
  tile->add_option("--window", t_window);
  tile->add_option("--width", t_width);

  // canonical
  auto* canonical = app.add_subcommand("canonical", "canonical tiling T_k");
  add_common(canonical, c_canon);
  int canon_k = 2, canon_width = 1024;
  std::string canon_json, canon_svg;
  canonical->add_option("--k", canon_k);
  canonical->add_option("--out-json", canon_json);
  canonical->add_option("--out-svg", canon_svg);
  canonical->add_option("--width", canon_width);

  // check
  auto* check = app.add_subcommand("check", "property-check suites");
  add_common(check, c_check);
  std::string suite, chk_address, chk_address2;
  int chk_k = 0, chk_p = 0, chk_q = 0, chk_grid = 512;
  check->add_option("--suite", suite,
                    "nesting|overlap|feasibility|shift-equivalence|"
                    "canonical-relation|commensurability")
      ->required();
  check->add_option("--address", chk_address);
  check->add_option("--address2", chk_address2);
  check->add_option("--k", chk_k);
  check->add_option("--p", chk_p);
  check->add_option("--q", chk_q);
  check->add_option("--grid", chk_grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*attractor)
      return cmd_attractor(c_attr, points, burn_in, seed, out, raster,
                           window_csv, mask_depth, out_pgm);
    if (*dimension) return cmd_dimension(c_dim);
    if (*neighbors) return cmd_neighbors(c_nbr, nbr_depth, cutoff, nbr_out);
    if (*centralset)
      return cmd_centralset(c_cs, grid, cs_depth, cs_points, cs_seed, cs_window,
                            out_mask, out_boundary, circles);
    if (*tile)
      return cmd_tile(c_tile, address_text, t_k, tile_choice, t_json, t_csv,
                      t_svg, t_window, t_width);
    if (*canonical)
      return cmd_canonical(c_canon, canon_k, canon_json, canon_svg, canon_width);
    if (*check)
      return cmd_check(c_check, suite, chk_address, chk_address2, chk_k, chk_p,
                       chk_q, chk_grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
