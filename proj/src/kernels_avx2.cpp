#include "tkgibbs/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace tkgibbs::kernels {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Four blocks per pass; word values live in the low 32 bits of each 64-bit
// lane so _mm256_mul_epu32 yields the full 32x32 products.
void philox_fill(uint64_t* dst, std::size_t n_blocks, const uint32_t key[2],
                 const uint32_t stream[2], uint64_t block0) {
  const __m256i m0 = _mm256_set1_epi64x(kPhiloxM0);
  const __m256i m1 = _mm256_set1_epi64x(kPhiloxM1);
  const __m256i w0 = _mm256_set1_epi64x(kPhiloxW0);
  const __m256i w1 = _mm256_set1_epi64x(kPhiloxW1);
  const __m256i lo32 = _mm256_set1_epi64x(0xFFFFFFFFll);
  const __m256i v2_init = _mm256_set1_epi64x(stream[0]);
  const __m256i v3_init = _mm256_set1_epi64x(stream[1]);
  const __m256i lane = _mm256_set_epi64x(3, 2, 1, 0);

  auto store_group = [&](uint64_t* out, __m256i v0, __m256i v1, __m256i v2, __m256i v3) {
    __m256i out_lo = _mm256_or_si256(v0, _mm256_slli_epi64(v1, 32));
    __m256i out_hi = _mm256_or_si256(v2, _mm256_slli_epi64(v3, 32));
    __m256i pair_lo = _mm256_unpacklo_epi64(out_lo, out_hi);
    __m256i pair_hi = _mm256_unpackhi_epi64(out_lo, out_hi);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out),
                        _mm256_permute2x128_si256(pair_lo, pair_hi, 0x20));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 4),
                        _mm256_permute2x128_si256(pair_lo, pair_hi, 0x31));
  };

  std::size_t i = 0;
  for (; i + 4 <= n_blocks; i += 4) {
    __m256i blk = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(block0 + i)), lane);
    __m256i v0 = _mm256_and_si256(blk, lo32);
    __m256i v1 = _mm256_srli_epi64(blk, 32);
    __m256i v2 = v2_init;
    __m256i v3 = v3_init;
    __m256i k0 = _mm256_set1_epi64x(key[0]);
    __m256i k1 = _mm256_set1_epi64x(key[1]);
    for (int r = 0; r < 10; ++r) {
      __m256i p0 = _mm256_mul_epu32(v0, m0);
      __m256i p1 = _mm256_mul_epu32(v2, m1);
      v0 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), v1), k0);
      v1 = _mm256_and_si256(p1, lo32);
      v2 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), v3), k1);
      v3 = _mm256_and_si256(p0, lo32);
      k0 = _mm256_and_si256(_mm256_add_epi64(k0, w0), lo32);
      k1 = _mm256_and_si256(_mm256_add_epi64(k1, w1), lo32);
    }
    store_group(dst + 2 * i, v0, v1, v2, v3);
  }
  if (i < n_blocks) scalar_ops().philox_fill(dst + 2 * i, n_blocks - i, key, stream, block0 + i);
}

double sum_sq(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d a = _mm256_loadu_pd(x + i);
    __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double weighted_pair_sq(const double* x, const double* w, std::size_t K) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= K; k += 4) {
    __m256d a = _mm256_loadu_pd(x + k);
    __m256d b = _mm256_loadu_pd(x + K + k);
    __m256d t = _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), t, acc);
  }
  double s = hsum(acc);
  for (; k < K; ++k) s += w[k] * (x[k] * x[k] + x[K + k] * x[K + k]);
  return s;
}

void scale_pairs(double* x, const double* s, std::size_t K) {
  std::size_t k = 0;
  for (; k + 4 <= K; k += 4) {
    __m256d vs = _mm256_loadu_pd(s + k);
    _mm256_storeu_pd(x + k, _mm256_mul_pd(_mm256_loadu_pd(x + k), vs));
    _mm256_storeu_pd(x + K + k, _mm256_mul_pd(_mm256_loadu_pd(x + K + k), vs));
  }
  for (; k < K; ++k) {
    x[k] *= s[k];
    x[K + k] *= s[k];
  }
}

inline __m256d reverse(__m256d v) { return _mm256_permute4x64_pd(v, 0x1B); }

// Row contributions a_n*A_n + b_n*B_n accumulate into one vector register,
// horizontally summed once at the end; scalar tails go to a separate total.
double h3_sum(const double* x, std::size_t K) {
  const double* a = x;
  const double* b = x + K;
  __m256d acc = _mm256_setzero_pd();
  double total = 0.0;
  for (std::size_t n = 2; n <= K; ++n) {
    const std::size_t m = n - 1;  // inner terms, indices p and m-1-p
    const double an = a[n - 1], bn = b[n - 1];
    std::size_t p = 0;
    if (m >= 4) {
      const __m256d van = _mm256_set1_pd(an);
      const __m256d vbn = _mm256_set1_pd(bn);
      for (; p + 4 <= m; p += 4) {
        __m256d va = _mm256_loadu_pd(a + p);
        __m256d vb = _mm256_loadu_pd(b + p);
        __m256d var = reverse(_mm256_loadu_pd(a + m - 4 - p));
        __m256d vbr = reverse(_mm256_loadu_pd(b + m - 4 - p));
        __m256d tA = _mm256_fnmadd_pd(vb, vbr, _mm256_mul_pd(va, var));
        __m256d tB = _mm256_fmadd_pd(va, vbr, _mm256_mul_pd(vb, var));
        acc = _mm256_fmadd_pd(tA, van, acc);
        acc = _mm256_fmadd_pd(tB, vbn, acc);
      }
    }
    double A = 0.0, B = 0.0;
    for (; p < m; ++p) {
      A += a[p] * a[m - 1 - p] - b[p] * b[m - 1 - p];
      B += a[p] * b[m - 1 - p] + b[p] * a[m - 1 - p];
    }
    total += an * A + bn * B;
  }
  return total + hsum(acc);
}

// Four draws per pass. The 53-bit magnitudes convert exactly through the
// split-word trick (both halves and their recombination are representable),
// so lanes match the scalar path bit for bit.
std::size_t zig_fast(const uint64_t* u, std::size_t n, double* out, const double* w,
                     const uint64_t* k) {
  const __m256i mask255 = _mm256_set1_epi64x(255);
  const __m256i mask_sign = _mm256_set1_epi64x(256);
  const __m256i mask32 = _mm256_set1_epi64x(0xFFFFFFFFll);
  const __m256i exp52 = _mm256_castpd_si256(_mm256_set1_pd(0x1.0p52));
  const __m256i exp84 = _mm256_castpd_si256(_mm256_set1_pd(0x1.0p84));
  const __m256d bias = _mm256_set1_pd(0x1.0p84 + 0x1.0p52);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(u + i));
    __m256i idx = _mm256_and_si256(v, mask255);
    __m256i j = _mm256_srli_epi64(v, 11);
    __m256i kv = _mm256_i64gather_epi64(reinterpret_cast<const long long*>(k), idx, 8);
    // j >= kv in any lane ends the fast run; values are < 2^53 so the
    // signed compare is exact
    __m256i slow = _mm256_or_si256(_mm256_cmpgt_epi64(j, kv), _mm256_cmpeq_epi64(j, kv));
    if (!_mm256_testz_si256(slow, slow)) break;
    __m256i lo = _mm256_or_si256(_mm256_and_si256(j, mask32), exp52);
    __m256i hi = _mm256_or_si256(_mm256_srli_epi64(j, 32), exp84);
    __m256d jd =
        _mm256_add_pd(_mm256_sub_pd(_mm256_castsi256_pd(hi), bias), _mm256_castsi256_pd(lo));
    __m256d x = _mm256_mul_pd(jd, _mm256_i64gather_pd(w, idx, 8));
    __m256i sign = _mm256_slli_epi64(_mm256_and_si256(v, mask_sign), 55);
    _mm256_storeu_pd(out + i, _mm256_xor_pd(x, _mm256_castsi256_pd(sign)));
  }
  std::size_t c = scalar_ops().zig_fast(u + i, n - i, out + i, w, k);
  return i + c;
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{"avx2",       philox_fill, sum_sq, weighted_pair_sq,
                       scale_pairs,  h3_sum,      zig_fast};
  return &ops;
}

}  // namespace tkgibbs::kernels

#else

namespace tkgibbs::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace tkgibbs::kernels

#endif
