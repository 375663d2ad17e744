#include "ifstile/specfile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ifstile {

namespace {

using nlohmann::json;

LoadedSpec from_json(const json& doc,
                     const std::optional<std::vector<double>>& force_costs) {
  if (!doc.is_object()) throw std::runtime_error("spec file: expected an object");
  if (!doc.contains("maps") || !doc["maps"].is_array() || doc["maps"].size() < 2)
    throw std::runtime_error("spec file: need an array of >= 2 maps");

  const int dim = doc.value("dimension", 2);
  if (dim != 1 && dim != 2)
    throw std::runtime_error("spec file: dimension must be 1 or 2");
  const double sim_tol = doc.value("similarity_tolerance", kSimilarityTol);
  const std::string name = doc.value("name", "");

  std::vector<Similitude> maps;
  std::vector<double> costs;
  bool any_cost = false, all_cost = true;
  for (const auto& m : doc["maps"]) {
    const auto& mat = m.at("matrix");
    if (!mat.is_array() || static_cast<int>(mat.size()) != dim)
      throw std::runtime_error("spec file: matrix must have one row per dimension");
    std::vector<double> linear;
    for (const auto& row : mat) {
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw std::runtime_error("spec file: matrix rows must have `dimension` entries");
      for (const auto& v : row) linear.push_back(v.get<double>());
    }
    Vec translation = m.at("translation").get<Vec>();
    if (static_cast<int>(translation.size()) != dim)
      throw std::runtime_error("spec file: translation size mismatch");
    maps.push_back(Similitude::make(dim, std::move(linear), std::move(translation),
                                    sim_tol));
    if (m.contains("cost")) {
      any_cost = true;
      costs.push_back(m["cost"].get<double>());
    } else {
      all_cost = false;
    }
  }
  if (any_cost && !all_cost)
    throw std::runtime_error("spec file: either every map has a cost or none does");

  LoadedSpec out;
  if (force_costs) {
    if (force_costs->size() != maps.size())
      throw std::runtime_error("forced costs: need one cost per map");
    out.spec = IfsSpec::make(std::move(maps), *force_costs, name);
  } else if (any_cost) {
    out.spec = IfsSpec::make(std::move(maps), std::move(costs), name);
  } else {
    out.spec = IfsSpec::make(std::move(maps), name);
  }
  out.similarity_tolerance = sim_tol;

  if (doc.contains("tile")) {
    const auto& t = doc["tile"];
    const std::string kind = t.at("kind").get<std::string>();
    if (kind == "interval") {
      out.tile = TileShape::interval(t.at("lo").get<double>(),
                                     t.at("hi").get<double>());
    } else if (kind == "box") {
      out.tile = TileShape::box2(Box{t.at("lo").get<Vec>(), t.at("hi").get<Vec>()});
    } else if (kind == "polygon") {
      out.tile = TileShape::simple_polygon(
          t.at("points").get<std::vector<std::array<double, 2>>>());
    } else {
      throw std::runtime_error("spec file: unknown tile kind " + kind);
    }
  }
  return out;
}

}  // namespace

LoadedSpec load_spec_file(const std::string& path,
                          const std::optional<std::vector<double>>& force_costs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open spec file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  try {
    return from_json(doc, force_costs);
  } catch (const json::exception& e) {
    throw std::runtime_error("bad spec file " + path + ": " + e.what());
  }
}

LoadedSpec parse_spec_json(const std::string& text,
                           const std::optional<std::vector<double>>& force_costs) {
  return from_json(json::parse(text), force_costs);
}

void save_spec_file(const IfsSpec& spec, const std::string& path) {
  json doc;
  doc["name"] = spec.name();
  doc["dimension"] = spec.dim();
  auto& arr = doc["maps"] = json::array();
  const int n = spec.dim();
  for (int d = 1; d <= spec.alphabet(); ++d) {
    const Similitude& f = spec.map(d);
    json rows = json::array();
    for (int r = 0; r < n; ++r) {
      json row = json::array();
      for (int c = 0; c < n; ++c) row.push_back(f.linear_at(r, c));
      rows.push_back(std::move(row));
    }
    json m;
    m["matrix"] = std::move(rows);
    m["translation"] = f.translation();
    m["cost"] = spec.costs()[d - 1];
    arr.push_back(std::move(m));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace ifstile
