#include "tkgibbs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tkgibbs/kernels.hpp"

namespace tkgibbs {
namespace {

constexpr int kLayers = 256;
constexpr double kScale53 = 0x1.0p-53;

// Gaussian ziggurat tables. Layer 0 is the base strip (rectangle plus tail
// beyond r), layers 1..255 are rectangles [0, x_i] x [y_i, y_{i+1}] of equal
// area v, with y_i = exp(-x_i^2/2), x_1 = r and y_256 = 1.
struct ZigTables {
  double x[kLayers + 1];
  double y[kLayers + 1];
  double w[kLayers];    // j -> x scale per layer
  uint64_t k[kLayers];  // fast-path thresholds on the 53-bit draw
  ZigguratInfo info;
};

double gauss(double x) { return std::exp(-0.5 * x * x); }

double tail_area(double r) { return std::sqrt(M_PI / 2.0) * std::erfc(r / std::sqrt(2.0)); }

// Residual of y_256 = 1 for a candidate r; decreasing in r.
double closure(double r) {
  double v = r * gauss(r) + tail_area(r);
  double y = gauss(r);
  double x = r;
  for (int i = 2; i <= kLayers - 1; ++i) {
    y += v / x;
    if (y >= 1.0) return 1e9;
    x = std::sqrt(-2.0 * std::log(y));
  }
  return (y + v / x) - 1.0;
}

ZigTables build_tables() {
  double lo = 3.0, hi = 4.0;
  if (!(closure(lo) > 0.0) || !(closure(hi) < 0.0))
    throw std::logic_error("ziggurat closure bracket failed");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (closure(mid) > 0.0 ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  double v = r * gauss(r) + tail_area(r);

  ZigTables t{};
  t.x[1] = r;
  t.y[1] = gauss(r);
  for (int i = 2; i <= kLayers; ++i) {
    t.y[i] = t.y[i - 1] + v / t.x[i - 1];
    t.x[i] = (i == kLayers) ? 0.0 : std::sqrt(-2.0 * std::log(t.y[i]));
  }
  t.x[0] = v / gauss(r);
  t.y[0] = 0.0;

  for (int i = 0; i < kLayers; ++i) {
    t.w[i] = t.x[i == 0 ? 0 : i] * kScale53;
    double ratio = (i == 0) ? r / t.x[0] : t.x[i + 1] / t.x[i];
    t.k[i] = static_cast<uint64_t>(ratio * 0x1.0p53);
  }

  double max_dev = std::abs((r * gauss(r) + tail_area(r)) - v);
  for (int i = 1; i < kLayers; ++i) {
    double area = t.x[i] * (t.y[i + 1] - t.y[i]);
    max_dev = std::max(max_dev, std::abs(area - v));
  }
  t.info = ZigguratInfo{r, v, t.y[kLayers] - 1.0, max_dev};
  return t;
}

const ZigTables& zig() {
  static const ZigTables t = build_tables();
  return t;
}

}  // namespace

const ZigguratInfo& ziggurat_info() { return zig().info; }

RngStream::RngStream(uint64_t seed, uint32_t worker_id)
    : pos_(buf_.size()), next_block_(0), seed_(seed), worker_id_(worker_id) {
  uint64_t s = seed;
  uint64_t key = detail::splitmix64(s);
  uint64_t t = seed + 0x9E3779B97F4A7C15ull * (static_cast<uint64_t>(worker_id) + 1);
  uint64_t salt = detail::splitmix64(t);
  key_[0] = static_cast<uint32_t>(key);
  key_[1] = static_cast<uint32_t>(key >> 32);
  stream_[0] = static_cast<uint32_t>(salt);
  stream_[1] = static_cast<uint32_t>(salt >> 32);
}

void RngStream::refill() {
  kernels::active_ops().philox_fill(buf_.data(), kBufBlocks, key_, stream_, next_block_);
  next_block_ += kBufBlocks;
  pos_ = 0;
}

uint64_t RngStream::next_u64() {
  if (pos_ == buf_.size()) refill();
  return buf_[pos_++];
}

double RngStream::uniform01() { return static_cast<double>(next_u64() >> 11) * kScale53; }

double RngStream::normal() {
  const ZigTables& t = zig();
  for (;;) {
    uint64_t u = next_u64();
    int i = static_cast<int>(u & 255u);
    uint64_t j = u >> 11;
    double sign = (u & 256u) ? -1.0 : 1.0;
    double x = static_cast<double>(j) * t.w[i];
    if (j < t.k[i]) return sign * x;
    if (i == 0) {
      // Marsaglia tail beyond r
      double r = t.x[1];
      double xt, e;
      do {
        xt = -std::log(1.0 - uniform01()) / r;
        e = -std::log(1.0 - uniform01());
      } while (2.0 * e < xt * xt);
      return sign * (r + xt);
    }
    double y = t.y[i] + uniform01() * (t.y[i + 1] - t.y[i]);
    if (y < gauss(x)) return sign * x;
  }
}

void RngStream::fill_normals(double* dst, std::size_t n) {
  const ZigTables& t = zig();
  const kernels::Ops& ops = kernels::active_ops();
  std::size_t i = 0;
  while (i < n) {
    if (pos_ == buf_.size()) refill();
    std::size_t m = std::min(buf_.size() - pos_, n - i);
    std::size_t c = ops.zig_fast(buf_.data() + pos_, m, dst + i, t.w, t.k);
    pos_ += c;
    i += c;
    // the stopping draw is still in the buffer; normal() re-reads it and
    // finishes through the slow path
    if (c < m) dst[i++] = normal();
  }
}

double RngStream::normal_polar() {
  if (polar_has_spare_) {
    polar_has_spare_ = false;
    return polar_spare_;
  }
  for (;;) {
    double a = 2.0 * uniform01() - 1.0;
    double b = 2.0 * uniform01() - 1.0;
    double s = a * a + b * b;
    if (s >= 1.0 || s == 0.0) continue;
    double m = std::sqrt(-2.0 * std::log(s) / s);
    polar_spare_ = b * m;
    polar_has_spare_ = true;
    return a * m;
  }
}

}  // namespace tkgibbs
