#include "tkgibbs/kernels.hpp"

namespace tkgibbs::kernels {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(uint32_t c[4], uint32_t k0, uint32_t k1) {
  uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * c[0];
  uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * c[2];
  uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  c[0] = hi1 ^ c[1] ^ k0;
  c[1] = lo1;
  c[2] = hi0 ^ c[3] ^ k1;
  c[3] = lo0;
}

void philox_fill(uint64_t* dst, std::size_t n_blocks, const uint32_t key[2],
                 const uint32_t stream[2], uint64_t block0) {
  for (std::size_t i = 0; i < n_blocks; ++i) {
    uint64_t blk = block0 + i;
    uint32_t c[4] = {static_cast<uint32_t>(blk), static_cast<uint32_t>(blk >> 32), stream[0],
                     stream[1]};
    uint32_t k0 = key[0], k1 = key[1];
    for (int r = 0; r < 10; ++r) {
      philox_round(c, k0, k1);
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    dst[2 * i] = c[0] | (static_cast<uint64_t>(c[1]) << 32);
    dst[2 * i + 1] = c[2] | (static_cast<uint64_t>(c[3]) << 32);
  }
}

double sum_sq(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double weighted_pair_sq(const double* x, const double* w, std::size_t K) {
  double s = 0.0;
  for (std::size_t k = 0; k < K; ++k) s += w[k] * (x[k] * x[k] + x[K + k] * x[K + k]);
  return s;
}

void scale_pairs(double* x, const double* s, std::size_t K) {
  for (std::size_t k = 0; k < K; ++k) {
    x[k] *= s[k];
    x[K + k] *= s[k];
  }
}

// Canonical evaluation order: outer n ascending, inner k left to right.
double h3_sum(const double* x, std::size_t K) {
  const double* a = x;
  const double* b = x + K;
  double total = 0.0;
  for (std::size_t n = 2; n <= K; ++n) {
    double A = 0.0, B = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      A += a[k - 1] * a[n - k - 1] - b[k - 1] * b[n - k - 1];
      B += a[k - 1] * b[n - k - 1] + b[k - 1] * a[n - k - 1];
    }
    total += a[n - 1] * A + b[n - 1] * B;
  }
  return total;
}

std::size_t zig_fast(const uint64_t* u, std::size_t n, double* out, const double* w,
                     const uint64_t* k) {
  for (std::size_t i = 0; i < n; ++i) {
    uint64_t v = u[i];
    unsigned idx = static_cast<unsigned>(v & 255u);
    uint64_t j = v >> 11;
    if (j >= k[idx]) return i;
    double x = static_cast<double>(j) * w[idx];
    out[i] = (v & 256u) ? -x : x;
  }
  return n;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", philox_fill, sum_sq, weighted_pair_sq, scale_pairs,
                       h3_sum,   zig_fast};
  return ops;
}

}  // namespace tkgibbs::kernels
