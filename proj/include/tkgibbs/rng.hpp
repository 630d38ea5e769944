#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace tkgibbs {

// Counter-based stream: Philox4x32-10 keyed by the run seed, with a per
// (seed, worker) stream salt in the upper counter words. Distinct workers
// therefore consume disjoint counter ranges of the same cipher and their
// outputs are independent and merge-order free. Generation is buffered in
// blocks through the active kernel set; the u64 sequence for a given
// (seed, worker) is identical across kernel variants.
class RngStream {
public:
  RngStream(uint64_t seed, uint32_t worker_id = 0);

  uint64_t next_u64();

  // 53-bit uniform on [0, 1)
  double uniform01();

  // standard normal via a 256-layer ziggurat (exact rejection construction)
  double normal();
  void fill_normals(double* dst, std::size_t n);

  // standard normal via the polar method; slower reference path used by
  // statistical cross-checks
  double normal_polar();

  uint64_t seed() const { return seed_; }
  uint32_t worker_id() const { return worker_id_; }

private:
  void refill();

  static constexpr std::size_t kBufBlocks = 1024;

  alignas(32) std::array<uint64_t, 2 * kBufBlocks> buf_;
  std::size_t pos_;
  uint32_t key_[2];
  uint32_t stream_[2];
  uint64_t next_block_;
  uint64_t seed_;
  uint32_t worker_id_;
  double polar_spare_ = 0.0;
  bool polar_has_spare_ = false;
};

// Construction diagnostics for the ziggurat tables: closure is the residual
// of the top-layer closing condition, max_area_dev the largest deviation of
// any layer area from the common value v.
struct ZigguratInfo {
  double r;
  double v;
  double closure;
  double max_area_dev;
};

const ZigguratInfo& ziggurat_info();

namespace detail {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

}  // namespace tkgibbs
