#include "ifstile/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ifstile {

namespace {

void check_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("similitude dimension must be >= 1");
}

// Gaussian elimination with partial pivoting; fine for the tiny matrices here.
std::vector<double> invert_matrix(int n, std::vector<double> m) {
  std::vector<double> inv(n * n, 0.0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    if (m[pivot * n + col] == 0.0)
      throw std::invalid_argument("singular linear part");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(m[pivot * n + c], m[col * n + c]);
        std::swap(inv[pivot * n + c], inv[col * n + c]);
      }
    }
    const double d = m[col * n + col];
    for (int c = 0; c < n; ++c) {
      m[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r * n + col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        m[r * n + c] -= f * m[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

}  // namespace

Similitude Similitude::make(int dim, std::vector<double> linear,
                            Vec translation, double tol) {
  check_dim(dim);
  const std::size_t n = static_cast<std::size_t>(dim);
  if (linear.size() != n * n) throw std::invalid_argument("bad linear size");
  if (translation.size() != n) throw std::invalid_argument("bad translation size");

  double frob2 = 0.0;
  for (double v : linear) frob2 += v * v;
  const double lambda2 = frob2 / dim;
  if (!(lambda2 > 0.0) || !std::isfinite(lambda2))
    throw std::invalid_argument("similitude ratio must be positive and finite");

  // M'M must equal lambda^2 I.
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double dot = 0.0;
      for (int k = 0; k < dim; ++k) dot += linear[k * dim + i] * linear[k * dim + j];
      const double want = (i == j) ? lambda2 : 0.0;
      if (std::abs(dot - want) > tol * lambda2)
        throw std::invalid_argument("linear part is not a similarity at the requested tolerance");
    }
  }

  Similitude s;
  s.dim_ = dim;
  s.linear_ = std::move(linear);
  s.trans_ = std::move(translation);
  s.ratio_ = std::sqrt(lambda2);
  return s;
}

Similitude Similitude::from_parts(int dim, std::vector<double> linear,
                                  Vec translation, double ratio) {
  check_dim(dim);
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw std::invalid_argument("similitude ratio must be positive and finite");
  Similitude s;
  s.dim_ = dim;
  s.linear_ = std::move(linear);
  s.trans_ = std::move(translation);
  s.ratio_ = ratio;
  return s;
}

Similitude Similitude::identity(int dim) { return scaling(dim, 1.0); }

Similitude Similitude::scaling(int dim, double factor, Vec translation) {
  check_dim(dim);
  if (translation.empty()) translation.assign(dim, 0.0);
  std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) m[i * dim + i] = factor;
  return make(dim, std::move(m), std::move(translation));
}

Similitude Similitude::rotation2d(double angle, double factor, Vec translation) {
  const double c = factor * std::cos(angle);
  const double s = factor * std::sin(angle);
  return make(2, {c, -s, s, c}, std::move(translation));
}

Vec Similitude::apply(const Vec& x) const {
  Vec y(dim_);
  apply_inplace(x.data(), y.data());
  return y;
}

void Similitude::apply_inplace(const double* x, double* y) const {
  for (int i = 0; i < dim_; ++i) {
    double acc = trans_[i];
    for (int j = 0; j < dim_; ++j) acc += linear_[i * dim_ + j] * x[j];
    y[i] = acc;
  }
}

bool Similitude::is_identity(double tol) const {
  for (int i = 0; i < dim_; ++i) {
    if (std::abs(trans_[i]) > tol) return false;
    for (int j = 0; j < dim_; ++j) {
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(linear_[i * dim_ + j] - want) > tol) return false;
    }
  }
  return true;
}

bool Similitude::is_isometry(double tol) const {
  return std::abs(ratio_ - 1.0) <= tol;
}

double Similitude::det() const {
  if (dim_ == 1) return linear_[0];
  if (dim_ == 2) return linear_[0] * linear_[3] - linear_[1] * linear_[2];
  // Sign from LU would do; use the similarity structure instead:
  // |det| = lambda^n, and we only need it for dim <= 2 in practice.
  throw std::logic_error("det() only implemented for dim <= 2");
}

Similitude compose(const Similitude& f, const Similitude& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("dimension mismatch in compose");
  const int n = f.dim();
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double fik = f.linear_at(i, k);
      if (fik == 0.0) continue;
      for (int j = 0; j < n; ++j) m[i * n + j] += fik * g.linear_at(k, j);
    }
  Vec t(n);
  for (int i = 0; i < n; ++i) {
    double acc = f.translation()[i];
    for (int j = 0; j < n; ++j) acc += f.linear_at(i, j) * g.translation()[j];
    t[i] = acc;
  }
  return Similitude::from_parts(n, std::move(m), std::move(t),
                                f.ratio() * g.ratio());
}

Similitude invert(const Similitude& f) {
  const int n = f.dim();
  std::vector<double> minv = invert_matrix(n, f.linear());
  Vec t(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += minv[i * n + j] * f.translation()[j];
    t[i] = -acc;
  }
  return Similitude::from_parts(n, std::move(minv), std::move(t),
                                1.0 / f.ratio());
}

bool approx_equal(const Similitude& a, const Similitude& b, double tol,
                  double scale_ref) {
  if (a.dim() != b.dim()) return false;
  const double bound = tol * (1.0 + scale_ref);
  const int n = a.dim();
  for (int i = 0; i < n * n; ++i)
    if (std::abs(a.linear()[i] - b.linear()[i]) > bound) return false;
  for (int i = 0; i < n; ++i)
    if (std::abs(a.translation()[i] - b.translation()[i]) > bound) return false;
  return true;
}

Word word_from_string(const std::string& digits) {
  Word w;
  w.reserve(digits.size());
  for (char c : digits) {
    if (c < '1' || c > '9') throw std::invalid_argument("word digits must be 1..9");
    w.push_back(c - '0');
  }
  return w;
}

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (int d : w) {
    if (d >= 1 && d <= 9) {
      s.push_back(static_cast<char>('0' + d));
    } else {
      s += "(" + std::to_string(d) + ")";
    }
  }
  return s;
}

Word concat(const Word& u, const Word& v) {
  Word w = u;
  w.insert(w.end(), v.begin(), v.end());
  return w;
}

void check_word(const Word& w, int alphabet) {
  for (int d : w)
    if (d < 1 || d > alphabet) throw std::invalid_argument("word digit out of range");
}

namespace {

// Smallest w such that `period` is w repeated.
Word primitive_root(const Word& period) {
  const std::size_t n = period.size();
  for (std::size_t len = 1; len <= n; ++len) {
    if (n % len != 0) continue;
    bool ok = true;
    for (std::size_t i = len; i < n && ok; ++i) ok = period[i] == period[i % len];
    if (ok) return Word(period.begin(), period.begin() + static_cast<long>(len));
  }
  return period;
}

}  // namespace

Address::Address(Word preperiod, Word period)
    : preperiod_(std::move(preperiod)), period_(std::move(period)) {
  if (period_.empty()) throw std::invalid_argument("address period must be non-empty");
  period_ = primitive_root(period_);
  // Slide the period window left while the preperiod tail matches the period
  // tail, so e.g. pre=1, per=21 becomes pre="", per=12.
  while (!preperiod_.empty() && preperiod_.back() == period_.back()) {
    preperiod_.pop_back();
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
  }
}

int Address::digit(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("address digits are 1-based");
  if (k <= preperiod_.size()) return preperiod_[k - 1];
  return period_[(k - 1 - preperiod_.size()) % period_.size()];
}

Word Address::prefix(std::size_t k) const {
  Word w;
  w.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) w.push_back(digit(i));
  return w;
}

Address Address::shifted(std::size_t p) const {
  if (p <= preperiod_.size()) {
    Word pre(preperiod_.begin() + static_cast<long>(p), preperiod_.end());
    return Address(std::move(pre), period_);
  }
  const std::size_t r = (p - preperiod_.size()) % period_.size();
  Word per = period_;
  std::rotate(per.begin(), per.begin() + static_cast<long>(r), per.end());
  return Address({}, std::move(per));
}

std::string Address::str() const {
  return word_to_string(preperiod_) + "(" + word_to_string(period_) + ")";
}

Address parse_address(const std::string& text, int alphabet) {
  const auto open = text.find('(');
  Word pre, per;
  if (open == std::string::npos) {
    pre = word_from_string(text);
    if (pre.empty()) throw std::invalid_argument("empty address");
    per = {pre.back()};
  } else {
    const auto close = text.find(')', open);
    if (close == std::string::npos || close != text.size() - 1)
      throw std::invalid_argument("malformed address: expected trailing (...) block");
    pre = word_from_string(text.substr(0, open));
    per = word_from_string(text.substr(open + 1, close - open - 1));
    if (per.empty()) throw std::invalid_argument("empty address period");
  }
  check_word(pre, alphabet);
  check_word(per, alphabet);
  return Address(std::move(pre), std::move(per));
}

Address disjunctive_address(int alphabet, int depth) {
  if (alphabet < 1 || depth < 1) throw std::invalid_argument("bad disjunctive parameters");
  Word block;
  Word w;
  for (int len = 1; len <= depth; ++len) {
    w.assign(len, 1);
    while (true) {
      block.insert(block.end(), w.begin(), w.end());
      int pos = len - 1;
      while (pos >= 0 && w[pos] == alphabet) {
        w[pos] = 1;
        --pos;
      }
      if (pos < 0) break;
      ++w[pos];
    }
  }
  return Address({}, std::move(block));
}

std::optional<std::size_t> disjunctive_witness(const Address& a, const Word& w,
                                               std::size_t search_depth) {
  if (w.empty()) return 0;
  for (std::size_t k = 0; k <= search_depth; ++k) {
    bool match = true;
    for (std::size_t i = 0; i < w.size() && match; ++i)
      match = a.digit(k + 1 + i) == w[i];
    if (match) return k;
  }
  return std::nullopt;
}

double CostFunction::symbol(int digit) const {
  if (digit < 1 || digit > alphabet())
    throw std::invalid_argument("cost digit out of range");
  return costs[digit - 1];
}

double CostFunction::operator()(const Word& w) const {
  double acc = 0.0;
  for (int d : w) acc += symbol(d);
  return acc;
}

IfsSpec IfsSpec::make(std::vector<Similitude> maps, std::vector<double> costs,
                      std::string name) {
  if (maps.size() < 2)
    throw std::invalid_argument("an IFS needs at least two similitudes");
  if (costs.size() != maps.size())
    throw std::invalid_argument("one cost per map required");
  const int dim = maps[0].dim();
  for (const auto& f : maps) {
    if (f.dim() != dim) throw std::invalid_argument("mixed dimensions in IFS");
    if (!(f.ratio() < 1.0))
      throw std::invalid_argument("IFS maps must be contractive (lambda < 1)");
  }
  for (double c : costs)
    if (!(c > 0.0)) throw std::invalid_argument("costs must be positive");
  IfsSpec s;
  s.maps_ = std::move(maps);
  s.costs_ = std::move(costs);
  s.name_ = std::move(name);
  return s;
}

IfsSpec IfsSpec::make(std::vector<Similitude> maps, std::string name) {
  double s = 0.0;
  for (const auto& f : maps) s = std::max(s, f.ratio());
  const double logs = std::log(s);
  std::vector<double> costs;
  costs.reserve(maps.size());
  for (const auto& f : maps) {
    const double a = std::log(f.ratio()) / logs;
    const double rounded = std::round(a);
    costs.push_back(std::abs(a - rounded) <= 1e-6 ? rounded : a);
  }
  return make(std::move(maps), std::move(costs), std::move(name));
}

std::vector<double> IfsSpec::ratios() const {
  std::vector<double> r;
  r.reserve(maps_.size());
  for (const auto& f : maps_) r.push_back(f.ratio());
  return r;
}

double IfsSpec::base_scale() const {
  double s = 0.0;
  for (const auto& f : maps_) s = std::max(s, f.ratio());
  return s;
}

std::vector<double> IfsSpec::exponents() const {
  const double logs = std::log(base_scale());
  std::vector<double> a;
  a.reserve(maps_.size());
  for (const auto& f : maps_) a.push_back(std::log(f.ratio()) / logs);
  return a;
}

bool IfsSpec::has_integer_exponents(double tol) const {
  for (double a : exponents())
    if (std::abs(a - std::round(a)) > tol) return false;
  return true;
}

Similitude word_map(const IfsSpec& spec, const Word& w) {
  check_word(w, spec.alphabet());
  Similitude acc = Similitude::identity(spec.dim());
  for (int d : w) acc = compose(acc, spec.map(d));
  return acc;
}

Similitude word_map_inverse(const IfsSpec& spec, const Word& w) {
  check_word(w, spec.alphabet());
  Similitude acc = Similitude::identity(spec.dim());
  for (int d : w) acc = compose(acc, invert(spec.map(d)));
  return acc;
}

}  // namespace ifstile
