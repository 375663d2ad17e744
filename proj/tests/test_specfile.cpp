#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "helpers.hpp"
#include "ifstile/specfile.hpp"

using namespace ifstile;
using namespace testfix;

#ifndef IFSTILE_SPECS_DIR
#error "IFSTILE_SPECS_DIR must be defined by the build"
#endif

namespace {
const std::string kSpecs = IFSTILE_SPECS_DIR;
}

TEST_CASE("all bundled spec files load") {
  struct Expect {
    const char* file;
    int dim;
    int alphabet;
  };
  const Expect expected[] = {
      {"dyadic-1d.json", 1, 2},   {"square-4map.json", 2, 4},
      {"sierpinski.json", 2, 3},  {"golden.json", 2, 2},
      {"quartic.json", 2, 2},     {"fern.json", 2, 3},
      {"crack.json", 2, 2},       {"newgrowth.json", 2, 2},
  };
  for (const auto& e : expected) {
    const LoadedSpec ls = load_spec_file(kSpecs + "/" + e.file);
    CHECK(ls.spec.dim() == e.dim);
    CHECK(ls.spec.alphabet() == e.alphabet);
    for (const auto& f : ls.spec.maps()) CHECK(f.ratio() < 1.0);
  }
}

TEST_CASE("bundled scales match their defining equations") {
  const auto golden_file = load_spec_file(kSpecs + "/golden.json");
  const double s1 = golden_file.spec.base_scale();
  CHECK(std::abs(s1 + s1 * s1 - 1.0) < 1e-12);

  const auto quartic_file = load_spec_file(kSpecs + "/quartic.json");
  const double s2 = quartic_file.spec.base_scale();
  CHECK(std::abs(s2 + s2 * s2 * s2 * s2 - 1.0) < 1e-12);
}

TEST_CASE("crack loads only because of its loose similarity tolerance") {
  const LoadedSpec ls = load_spec_file(kSpecs + "/crack.json");
  CHECK(ls.similarity_tolerance > kSimilarityTol);
  // Re-validating the second map at the strict default fails.
  const Similitude& f2 = ls.spec.map(2);
  CHECK_THROWS(Similitude::make(2, f2.linear(), f2.translation()));
  CHECK(ls.spec.costs()[0] == 1.0);
  CHECK(ls.spec.costs()[1] == 2.0);
}

TEST_CASE("fern default costs are the non-integer exponents") {
  const LoadedSpec ls = load_spec_file(kSpecs + "/fern.json");
  CHECK_FALSE(ls.spec.has_integer_exponents());
  CHECK(ls.spec.costs()[0] == 1.0);
  CHECK(ls.spec.costs()[1] > 7.9);
  CHECK(ls.spec.costs()[1] < 8.1);

  const LoadedSpec forced =
      load_spec_file(kSpecs + "/fern.json", std::vector<double>{1.0, 8.0, 8.0});
  CHECK(forced.spec.costs()[1] == 8.0);
}

TEST_CASE("tile entries parse") {
  const LoadedSpec d = load_spec_file(kSpecs + "/dyadic-1d.json");
  REQUIRE(d.tile.has_value());
  CHECK(d.tile->kind == TileShape::Kind::Interval);
  const LoadedSpec sq = load_spec_file(kSpecs + "/square-4map.json");
  REQUIRE(sq.tile.has_value());
  CHECK(sq.tile->kind == TileShape::Kind::Box2);
}

TEST_CASE("malformed inputs are rejected with clear errors") {
  CHECK_THROWS(load_spec_file("/nonexistent/path.json"));
  CHECK_THROWS(parse_spec_json("not json at all"));
  CHECK_THROWS(parse_spec_json("{\"dimension\": 2, \"maps\": []}"));
  // Partial costs.
  CHECK_THROWS(parse_spec_json(R"({
    "dimension": 1,
    "maps": [
      {"matrix": [[0.5]], "translation": [0], "cost": 1},
      {"matrix": [[0.5]], "translation": [0.5]}
    ]})"));
  // Non-similar matrix at default tolerance.
  CHECK_THROWS(parse_spec_json(R"({
    "dimension": 2,
    "maps": [
      {"matrix": [[0.5, 0.2], [0, 0.5]], "translation": [0, 0]},
      {"matrix": [[0.5, 0], [0, 0.5]], "translation": [0.5, 0]}
    ]})"));
}

TEST_CASE("save/load round trip") {
  const IfsSpec g = golden();
  const std::string path = "test_roundtrip_spec.json";
  save_spec_file(g, path);
  const LoadedSpec back = load_spec_file(path);
  REQUIRE(back.spec.alphabet() == 2);
  for (int d = 1; d <= 2; ++d)
    CHECK(approx_equal(back.spec.map(d), g.map(d), 1e-15, 1.0));
  CHECK(back.spec.costs() == g.costs());
  std::remove(path.c_str());
}
