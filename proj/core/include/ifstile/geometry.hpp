#pragma once

// Similitude algebra, words, addresses and cost functions. Everything here is
// an immutable value type; all operations are pure.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ifstile {

inline constexpr double kSimilarityTol = 1e-9;
inline constexpr double kComposeTol = 1e-12;

using Vec = std::vector<double>;

/// Affine map x |-> M*x + t whose linear part scales all distances by a
/// fixed ratio lambda (M = lambda * Q with Q orthogonal). Contractions,
/// isometries and expansions are all representable; lambda > 0 always.
class Similitude {
 public:
  /// Validates that M'M = lambda^2 I within `tol` (relative) and caches
  /// lambda. Throws std::invalid_argument otherwise.
  static Similitude make(int dim, std::vector<double> linear, Vec translation,
                         double tol = kSimilarityTol);
  static Similitude identity(int dim);
  static Similitude scaling(int dim, double factor, Vec translation = {});
  /// 2-d rotation by `angle` radians, scaled by `factor`.
  static Similitude rotation2d(double angle, double factor = 1.0,
                               Vec translation = {0.0, 0.0});
  /// Trusted constructor used by compose/invert: skips the orthogonality
  /// check and carries `ratio` as given, so systems admitted under a loose
  /// similarity tolerance stay composable.
  static Similitude from_parts(int dim, std::vector<double> linear,
                               Vec translation, double ratio);

  int dim() const { return dim_; }
  const std::vector<double>& linear() const { return linear_; }
  const Vec& translation() const { return trans_; }
  double ratio() const { return ratio_; }

  double linear_at(int row, int col) const { return linear_[row * dim_ + col]; }
  Vec apply(const Vec& x) const;
  void apply_inplace(const double* x, double* y) const;

  bool is_identity(double tol = kSimilarityTol) const;
  bool is_isometry(double tol = kSimilarityTol) const;
  bool is_contraction() const { return ratio_ < 1.0; }
  /// Determinant of the linear part (sign distinguishes flips).
  double det() const;

 private:
  Similitude() = default;
  int dim_ = 0;
  std::vector<double> linear_;  // dim x dim, row-major
  Vec trans_;
  double ratio_ = 0.0;
};

/// result(x) = f(g(x)); ratios multiply.
Similitude compose(const Similitude& f, const Similitude& g);
/// Exact inverse; ratio becomes 1/lambda.
Similitude invert(const Similitude& f);
/// Entrywise comparison of linear part and translation, absolute tolerance
/// tol * (1 + scale_ref).
bool approx_equal(const Similitude& a, const Similitude& b, double tol,
                  double scale_ref = 0.0);

/// Finite string over the alphabet {1..m}; empty is allowed.
using Word = std::vector<int>;

Word word_from_string(const std::string& digits);
std::string word_to_string(const Word& w);
Word concat(const Word& u, const Word& v);

/// Eventually periodic infinite digit string: preperiod followed by an
/// endlessly repeated non-empty period. Canonicalized on construction (the
/// period is reduced to its primitive root and slid left into the preperiod
/// where possible) so equal sequences compare equal.
class Address {
 public:
  Address(Word preperiod, Word period);
  explicit Address(Word period) : Address({}, std::move(period)) {}

  /// 1-based digit access, defined for every k >= 1.
  int digit(std::size_t k) const;
  Word prefix(std::size_t k) const;
  Address shifted(std::size_t p) const;

  const Word& preperiod() const { return preperiod_; }
  const Word& period() const { return period_; }
  bool operator==(const Address&) const = default;
  std::string str() const;

 private:
  Word preperiod_;
  Word period_;
};

/// Parses "12(21)" as preperiod 12, period 21. A bare finite string means
/// that string with its last digit repeated forever. Throws on digits
/// outside 1..alphabet.
Address parse_address(const std::string& text, int alphabet);

/// The concatenation of every word over {1..m} of length <= depth, in
/// length-then-lexicographic order, used as a period block. Contains every
/// word of length <= depth by construction.
Address disjunctive_address(int alphabet, int depth);

/// First position k <= search_depth such that digits k+1 .. k+|w| of `a`
/// equal w, if any. A finite scan cannot prove disjunctiveness; this only
/// produces witnesses.
std::optional<std::size_t> disjunctive_witness(const Address& a, const Word& w,
                                               std::size_t search_depth);

/// Additive per-symbol word cost; cost of the empty word is 0.
struct CostFunction {
  std::vector<double> costs;  // costs[d-1] for digit d, all > 0

  int alphabet() const { return static_cast<int>(costs.size()); }
  double symbol(int digit) const;
  double operator()(const Word& w) const;
};

/// An ordered IFS of m >= 2 contractive similitudes with per-map costs.
class IfsSpec {
 public:
  IfsSpec() = default;  // empty; populate via make
  static IfsSpec make(std::vector<Similitude> maps, std::vector<double> costs,
                      std::string name = "");
  /// Costs default to the scale exponents a_i, rounded to integers when
  /// within 1e-6 of one.
  static IfsSpec make(std::vector<Similitude> maps, std::string name = "");

  int dim() const { return maps_[0].dim(); }
  int alphabet() const { return static_cast<int>(maps_.size()); }
  const std::vector<Similitude>& maps() const { return maps_; }
  const Similitude& map(int digit) const { return maps_[digit - 1]; }
  const std::vector<double>& costs() const { return costs_; }
  const std::string& name() const { return name_; }

  std::vector<double> ratios() const;
  /// s = max_i lambda_i.
  double base_scale() const;
  /// a_i with lambda_i = s^{a_i}; a_i >= 1 and min a_i = 1.
  std::vector<double> exponents() const;
  /// True when every a_i is an integer within `tol`.
  bool has_integer_exponents(double tol = kSimilarityTol) const;
  CostFunction cost_function() const { return CostFunction{costs_}; }

 private:
  std::vector<Similitude> maps_;
  std::vector<double> costs_;
  std::string name_;
};

void check_word(const Word& w, int alphabet);

/// f_(j|l) = f_{j1} o f_{j2} o ... o f_{jl}; the empty word gives identity.
Similitude word_map(const IfsSpec& spec, const Word& w);

/// f_{i1}^{-1} o f_{i2}^{-1} o ... o f_{ik}^{-1}, with f_{ik}^{-1} applied
/// first to the argument. Note this is the inverse of the *reversed* word
/// map f_{ik} o ... o f_{i1}, not of word_map(w); that ordering is exactly
/// what makes truncations of a tiling telescope into one another when the
/// prefix is extended by a digit.
Similitude word_map_inverse(const IfsSpec& spec, const Word& w);

}  // namespace ifstile
