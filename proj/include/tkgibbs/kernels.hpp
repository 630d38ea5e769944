#pragma once

#include <cstddef>
#include <cstdint>

namespace tkgibbs::kernels {

// Hot-loop primitives with a scalar reference implementation and an AVX2
// variant selected at runtime. All variants are deterministic for a fixed
// build; philox_fill is bitwise identical across variants, the floating
// point reductions may differ at round-off level.
struct Ops {
  const char* name;

  // Philox4x32-10 counter generator. Writes 2*n_blocks u64 words for block
  // indices block0..block0+n_blocks-1 under the given key/stream words.
  void (*philox_fill)(uint64_t* dst, std::size_t n_blocks, const uint32_t key[2],
                      const uint32_t stream[2], uint64_t block0);

  // sum of x[i]^2 over i < n
  double (*sum_sq)(const double* x, std::size_t n);

  // sum of w[k] * (x[k]^2 + x[k+K]^2) over k < K
  double (*weighted_pair_sq)(const double* x, const double* w, std::size_t K);

  // x[k] *= s[k] and x[k+K] *= s[k] for k < K
  void (*scale_pairs)(double* x, const double* s, std::size_t K);

  // Cubic double sum on the half-split vector x = (a, b) of length 2K:
  //   sum_{n=2}^{K} a_n*A_n + b_n*B_n with
  //   A_n = sum_{k=1}^{n-1} a_k*a_{n-k} - b_k*b_{n-k}
  //   B_n = sum_{k=1}^{n-1} a_k*b_{n-k} + b_k*a_{n-k}
  // Homogeneous of degree 3 in x.
  double (*h3_sum)(const double* x, std::size_t K);

  // Ziggurat fast path over a block of raw draws: for each draw u, layer
  // index u & 255, magnitude (u >> 11) * w[layer], sign bit u & 256. Writes
  // one normal per draw while u >> 11 stays below the threshold k[layer] and
  // stops at the first draw needing the slow path, leaving it unconsumed.
  // Returns the number of draws consumed, equal to normals written. Output
  // is bitwise identical across variants.
  std::size_t (*zig_fast)(const uint64_t* u, std::size_t n, double* out, const double* w,
                          const uint64_t* k);
};

const Ops& scalar_ops();

// Null when the build or the CPU lacks AVX2+FMA.
const Ops* avx2_ops();

// Runtime selection: best available, overridable by TKGIBBS_KERNEL
// (scalar | avx2 | auto). Unknown or unavailable values fall back to auto.
const Ops& active_ops();

}  // namespace tkgibbs::kernels
