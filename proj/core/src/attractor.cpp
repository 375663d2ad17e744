#include "ifstile/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace ifstile {

double Box::diameter() const {
  double d2 = 0.0;
  for (int i = 0; i < dim(); ++i) d2 += extent(i) * extent(i);
  return std::sqrt(d2);
}

Vec Box::center() const {
  Vec c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Box Box::inflated(double margin) const {
  Box b = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    b.lo[i] -= margin;
    b.hi[i] += margin;
  }
  return b;
}

bool Box::contains(const Vec& x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

bool Box::intersects(const Box& other) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (hi[i] < other.lo[i] || other.hi[i] < lo[i]) return false;
  return true;
}

double Box::distance(const Vec& x) const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double d = std::max({lo[i] - x[i], x[i] - hi[i], 0.0});
    d2 += d * d;
  }
  return std::sqrt(d2);
}

Box Box::hull(const Box& a, const Box& b) {
  Box h = a;
  for (std::size_t i = 0; i < h.lo.size(); ++i) {
    h.lo[i] = std::min(h.lo[i], b.lo[i]);
    h.hi[i] = std::max(h.hi[i], b.hi[i]);
  }
  return h;
}

Vec PointCloud::at(std::size_t i) const {
  return Vec(coords.begin() + static_cast<long>(i * dim),
             coords.begin() + static_cast<long>((i + 1) * dim));
}

void PointCloud::push(const double* p) {
  coords.insert(coords.end(), p, p + dim);
}

Box bounding_box(const PointCloud& cloud) {
  if (cloud.empty()) throw std::invalid_argument("bounding_box of empty cloud");
  Box b{Vec(cloud.dim, std::numeric_limits<double>::infinity()),
        Vec(cloud.dim, -std::numeric_limits<double>::infinity())};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double* p = cloud.point(i);
    for (int d = 0; d < cloud.dim; ++d) {
      b.lo[d] = std::min(b.lo[d], p[d]);
      b.hi[d] = std::max(b.hi[d], p[d]);
    }
  }
  return b;
}

RasterField RasterField::zeros(const Box& window, int width, int height) {
  if (window.dim() != 2) throw std::invalid_argument("raster window must be 2-d");
  if (width < 2 || height < 2) throw std::invalid_argument("raster resolution must be >= 2x2");
  if (!(window.extent(0) > 0.0) || !(window.extent(1) > 0.0))
    throw std::invalid_argument("degenerate raster window");
  RasterField f;
  f.window = window;
  f.width = width;
  f.height = height;
  f.samples.assign(static_cast<std::size_t>(width) * height, 0.0);
  return f;
}

Vec RasterField::center(int ix, int iy) const {
  return {window.lo[0] + (ix + 0.5) * pixel_w(),
          window.lo[1] + (iy + 0.5) * pixel_h()};
}

double RasterField::sample(double x, double y, double outside) const {
  const int ix = static_cast<int>(std::floor((x - window.lo[0]) / pixel_w()));
  const int iy = static_cast<int>(std::floor((y - window.lo[1]) / pixel_h()));
  if (ix < 0 || iy < 0 || ix >= width || iy >= height) return outside;
  return at(ix, iy);
}

std::size_t RasterField::count_where(double threshold) const {
  std::size_t n = 0;
  for (double v : samples) n += (v > threshold) ? 1 : 0;
  return n;
}

namespace {

// splitmix64: tiny, portable, and identical on every platform, which the
// golden-file tests rely on.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Unbiased-enough digit draw via 64x32 multiply-shift.
  int digit(int m) {
    const std::uint64_t x = next() >> 32;
    return 1 + static_cast<int>((x * static_cast<std::uint64_t>(m)) >> 32);
  }
};

void parallel_rows(int height, const std::function<void(int, int)>& run) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const int workers = static_cast<int>(std::min<unsigned>(hw, 16));
  if (workers <= 1 || height < 4 * workers) {
    run(0, height);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (height + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int y0 = w * chunk;
    const int y1 = std::min(height, y0 + chunk);
    if (y0 >= y1) break;
    pool.emplace_back(run, y0, y1);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

PointCloud chaos_game(const IfsSpec& spec, std::size_t count,
                      std::size_t burn_in, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("chaos_game needs count >= 1");
  const int n = spec.dim();
  SplitMix64 rng{seed};

  // Start near the attractor: drive an arbitrary point with f_1 a while.
  Vec x(n, 0.0), y(n, 0.0);
  for (int i = 0; i < 64; ++i) {
    spec.map(1).apply_inplace(x.data(), y.data());
    std::swap(x, y);
  }

  PointCloud cloud;
  cloud.dim = n;
  cloud.seed = seed;
  cloud.burn_in = burn_in;
  cloud.coords.reserve(count * n);
  for (std::size_t i = 0; i < burn_in + count; ++i) {
    spec.map(rng.digit(spec.alphabet())).apply_inplace(x.data(), y.data());
    std::swap(x, y);
    if (i >= burn_in) cloud.push(x.data());
  }
  return cloud;
}

namespace {

void mark_disk(RasterField& f, double cx, double cy, double r, bool ignore_y) {
  const double pw = f.pixel_w(), ph = f.pixel_h();
  const int x0 = std::max(0, static_cast<int>(std::floor((cx - r - f.window.lo[0]) / pw - 0.5)));
  const int x1 = std::min(f.width - 1, static_cast<int>(std::ceil((cx + r - f.window.lo[0]) / pw)));
  const int y0 = ignore_y ? 0 : std::max(0, static_cast<int>(std::floor((cy - r - f.window.lo[1]) / ph - 0.5)));
  const int y1 = ignore_y ? f.height - 1 : std::min(f.height - 1, static_cast<int>(std::ceil((cy + r - f.window.lo[1]) / ph)));
  const double r2 = r * r;
  for (int iy = y0; iy <= y1; ++iy) {
    const double py = f.window.lo[1] + (iy + 0.5) * ph;
    const double dy = ignore_y ? 0.0 : py - cy;
    for (int ix = x0; ix <= x1; ++ix) {
      const double px = f.window.lo[0] + (ix + 0.5) * pw;
      const double dx = px - cx;
      if (dx * dx + dy * dy <= r2) f.at(ix, iy) = 1.0;
    }
  }
}

void mask_descend(const IfsSpec& spec, RasterField& f, const Vec& c, double r,
                  int depth, bool one_d) {
  // Prune subtrees whose image ball cannot reach the window.
  Vec probe = one_d ? Vec{c[0], 0.0} : c;
  if (f.window.distance(probe) > r + 0.5 * std::hypot(f.pixel_w(), f.pixel_h()))
    return;
  if (depth == 0) {
    mark_disk(f, c[0], one_d ? 0.0 : c[1], r, one_d);
    return;
  }
  for (int d = 1; d <= spec.alphabet(); ++d) {
    const Similitude& g = spec.map(d);
    mask_descend(spec, f, g.apply(c), r * g.ratio(), depth - 1, one_d);
  }
}

}  // namespace

RasterField attractor_mask(const IfsSpec& spec, const Box& window, int width,
                           int height, int depth) {
  if (depth < 1) throw std::invalid_argument("attractor_mask needs depth >= 1");
  RasterField f = RasterField::zeros(window, width, height);
  const bool one_d = spec.dim() == 1;
  Vec c;
  double r;
  if (one_d) {
    c = {0.5 * (window.lo[0] + window.hi[0])};
    r = 0.5 * window.extent(0);
  } else {
    c = window.center();
    r = 0.5 * window.diameter();
  }
  mask_descend(spec, f, c, r, depth, one_d);
  return f;
}

double moran_dimension(const std::vector<double>& ratios) {
  if (ratios.size() < 2) throw std::invalid_argument("need at least two ratios");
  for (double l : ratios)
    if (!(l > 0.0 && l < 1.0))
      throw std::invalid_argument("ratios must lie in (0, 1)");

  const auto phi = [&](double d) {
    double s = 0.0;
    for (double l : ratios) s += std::pow(l, d);
    return s;
  };

  // phi is strictly decreasing with phi(0) = m >= 2; bracket then bisect.
  double lo = 0.0, hi = 1.0;
  while (phi(hi) > 1.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 1.0 ? lo : hi) = mid;
  }
  const double d = 0.5 * (lo + hi);
  if (std::abs(phi(d) - 1.0) > 1e-12)
    throw std::runtime_error("moran_dimension failed to converge");
  return d;
}

PointGrid::PointGrid(const PointCloud& cloud) {
  if (cloud.empty()) throw std::invalid_argument("PointGrid over empty cloud");
  dim_ = cloud.dim;
  count_ = cloud.size();

  // Lift 1-d clouds onto the y = 0 line.
  std::vector<double> pts(count_ * 2);
  for (std::size_t i = 0; i < count_; ++i) {
    pts[2 * i] = cloud.point(i)[0];
    pts[2 * i + 1] = dim_ >= 2 ? cloud.point(i)[1] : 0.0;
  }

  double lx = pts[0], hx = pts[0], ly = pts[1], hy = pts[1];
  for (std::size_t i = 0; i < count_; ++i) {
    lx = std::min(lx, pts[2 * i]);
    hx = std::max(hx, pts[2 * i]);
    ly = std::min(ly, pts[2 * i + 1]);
    hy = std::max(hy, pts[2 * i + 1]);
  }
  bounds_ = Box{{lx, ly}, {hx, hy}};

  const double ex = std::max(hx - lx, 1e-300), ey = std::max(hy - ly, 1e-300);
  // Aim for a couple of points per cell.
  const double target = std::sqrt(ex * ey / std::max<std::size_t>(count_, 1));
  cell_ = std::max(target, 1e-12 * std::max(ex, ey));
  if (!(cell_ > 0.0)) cell_ = 1.0;
  nx_ = std::max(1, std::min(4096, static_cast<int>(ex / cell_) + 1));
  ny_ = std::max(1, std::min(4096, static_cast<int>(ey / cell_) + 1));
  cell_ = std::max(ex / nx_, ey / ny_) + 1e-300;

  const auto cell_of = [&](double x, double y) {
    int cx = static_cast<int>((x - lx) / cell_);
    int cy = static_cast<int>((y - ly) / cell_);
    cx = std::clamp(cx, 0, nx_ - 1);
    cy = std::clamp(cy, 0, ny_ - 1);
    return static_cast<std::size_t>(cy) * nx_ + cx;
  };

  // Counting sort into CSR layout.
  start_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
  for (std::size_t i = 0; i < count_; ++i)
    ++start_[cell_of(pts[2 * i], pts[2 * i + 1]) + 1];
  for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
  pts_.resize(count_ * 2);
  std::vector<std::uint32_t> cursor(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < count_; ++i) {
    const std::size_t c = cell_of(pts[2 * i], pts[2 * i + 1]);
    const std::uint32_t slot = cursor[c]++;
    pts_[2 * slot] = pts[2 * i];
    pts_[2 * slot + 1] = pts[2 * i + 1];
  }
}

double PointGrid::nearest_distance(const double* q) const {
  const double qx = q[0];
  const double qy = dim_ >= 2 ? q[1] : 0.0;
  int cx = static_cast<int>((qx - bounds_.lo[0]) / cell_);
  int cy = static_cast<int>((qy - bounds_.lo[1]) / cell_);
  cx = std::clamp(cx, 0, nx_ - 1);
  cy = std::clamp(cy, 0, ny_ - 1);
  const double d0 = bounds_.distance({qx, qy});

  double best2 = std::numeric_limits<double>::infinity();
  const int max_ring = std::max(nx_, ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    // Everything in ring `ring` is at least (ring-1)*cell away (and at least
    // d0 when the query is outside the grid), so we can stop early.
    const double lb = std::max((ring - 1) * cell_, d0);
    if (best2 <= lb * lb) break;
    const int x0 = cx - ring, x1 = cx + ring, y0 = cy - ring, y1 = cy + ring;
    for (int iy = y0; iy <= y1; ++iy) {
      if (iy < 0 || iy >= ny_) continue;
      const bool edge_row = (iy == y0 || iy == y1);
      const int step = edge_row ? 1 : (x1 - x0 == 0 ? 1 : x1 - x0);
      for (int ix = x0; ix <= x1; ix += step) {
        if (ix < 0 || ix >= nx_) continue;
        const std::size_t c = static_cast<std::size_t>(iy) * nx_ + ix;
        for (std::uint32_t s = start_[c]; s < start_[c + 1]; ++s) {
          const double dx = pts_[2 * s] - qx;
          const double dy = pts_[2 * s + 1] - qy;
          best2 = std::min(best2, dx * dx + dy * dy);
        }
      }
    }
  }
  return std::sqrt(best2);
}

RasterField distance_field(const PointCloud& cloud, const Box& window,
                           int width, int height) {
  if (cloud.empty()) throw std::invalid_argument("distance_field over empty cloud");
  RasterField f = RasterField::zeros(window, width, height);
  const PointGrid grid(cloud);
  parallel_rows(height, [&](int y0, int y1) {
    for (int iy = y0; iy < y1; ++iy) {
      const double py = f.window.lo[1] + (iy + 0.5) * f.pixel_h();
      for (int ix = 0; ix < width; ++ix) {
        const double p[2] = {f.window.lo[0] + (ix + 0.5) * f.pixel_w(), py};
        f.at(ix, iy) = grid.nearest_distance(p);
      }
    }
  });
  return f;
}

void write_csv(const PointCloud& cloud, std::ostream& out) {
  out.precision(17);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double* p = cloud.point(i);
    for (int d = 0; d < cloud.dim; ++d) {
      if (d) out << ',';
      out << p[d];
    }
    out << '\n';
  }
}

void write_csv(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_csv(cloud, out);
}

void write_pgm(const RasterField& field, const std::string& path, bool binary,
               bool is_mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);

  double scale = 1.0;
  const int maxval = is_mask ? 255 : 65535;
  if (!is_mask) {
    double top = 0.0;
    for (double v : field.samples) top = std::max(top, v);
    scale = top > 0.0 ? maxval / top : 0.0;
  }
  const auto quant = [&](double v) {
    if (is_mask) return v > 0.5 ? 255 : 0;
    return std::clamp(static_cast<int>(std::lround(v * scale)), 0, maxval);
  };

  out << (binary ? "P5" : "P2") << '\n'
      << field.width << ' ' << field.height << '\n'
      << maxval << '\n';
  // PGM rows run top-down; our row 0 is y-min, so flip.
  for (int iy = field.height - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < field.width; ++ix) {
      const int v = quant(field.at(ix, iy));
      if (binary) {
        if (maxval > 255) out.put(static_cast<char>(v >> 8));
        out.put(static_cast<char>(v & 0xff));
      } else {
        out << v << (ix + 1 == field.width ? '\n' : ' ');
      }
    }
  }

  nlohmann::json meta;
  meta["window"] = {{"x0", field.window.lo[0]}, {"x1", field.window.hi[0]},
                    {"y0", field.window.lo[1]}, {"y1", field.window.hi[1]}};
  meta["width"] = field.width;
  meta["height"] = field.height;
  meta["kind"] = is_mask ? "mask" : "distance";
  meta["quant_scale"] = scale;
  std::ofstream side(path + ".json", std::ios::binary);
  if (!side) throw std::runtime_error("cannot open " + path + ".json");
  side << meta.dump(2) << '\n';
}

}  // namespace ifstile
