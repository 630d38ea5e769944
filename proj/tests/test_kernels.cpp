#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tkgibbs/kernels.hpp"
#include "tkgibbs/rng.hpp"

using namespace tkgibbs;

namespace {

std::vector<double> random_vector(std::size_t n, uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
  return v;
}

}  // namespace

namespace {

void check_block(const kernels::Ops& ops, uint64_t block0, const uint32_t key[2],
                 const uint32_t stream[2], const uint32_t expect[4]) {
  uint64_t out[2];
  ops.philox_fill(out, 1, key, stream, block0);
  CHECK(static_cast<uint32_t>(out[0]) == expect[0]);
  CHECK(static_cast<uint32_t>(out[0] >> 32) == expect[1]);
  CHECK(static_cast<uint32_t>(out[1]) == expect[2]);
  CHECK(static_cast<uint32_t>(out[1] >> 32) == expect[3]);
}

}  // namespace

TEST_CASE("philox matches the published known-answer blocks") {
  // Philox4x32-10 reference vectors: zero input, all-ones input (exercises
  // key-schedule wraparound) and the pi-digit input.
  const uint32_t zk[2] = {0, 0}, zs[2] = {0, 0};
  const uint32_t z_expect[4] = {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
  const uint32_t fk[2] = {0xffffffffu, 0xffffffffu}, fs[2] = {0xffffffffu, 0xffffffffu};
  const uint32_t f_expect[4] = {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu};
  const uint32_t pk[2] = {0xa4093822u, 0x299f31d0u}, ps[2] = {0x13198a2eu, 0x03707344u};
  const uint32_t p_expect[4] = {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
  const uint64_t pi_block = 0x85a308d3243f6a88ull;  // c1:c0

  check_block(kernels::scalar_ops(), 0, zk, zs, z_expect);
  check_block(kernels::scalar_ops(), ~0ull, fk, fs, f_expect);
  check_block(kernels::scalar_ops(), pi_block, pk, ps, p_expect);
  if (const kernels::Ops* avx2 = kernels::avx2_ops()) {
    check_block(*avx2, 0, zk, zs, z_expect);
    check_block(*avx2, ~0ull, fk, fs, f_expect);
    check_block(*avx2, pi_block, pk, ps, p_expect);
  }
}

TEST_CASE("scalar philox blocks are independent of fill partitioning") {
  uint32_t key[2] = {0x12345678u, 0x9abcdef0u}, stream[2] = {0xdeadbeefu, 0x01020304u};
  std::vector<uint64_t> whole(64), pieces(64);
  kernels::scalar_ops().philox_fill(whole.data(), 32, key, stream, 7);
  for (uint64_t b = 0; b < 32; ++b)
    kernels::scalar_ops().philox_fill(pieces.data() + 2 * b, 1, key, stream, 7 + b);
  CHECK(whole == pieces);
}

TEST_CASE("avx2 kernels agree with scalar") {
  const kernels::Ops* avx2 = kernels::avx2_ops();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 unavailable on this host; dispatch falls back to scalar");
    CHECK(&kernels::active_ops() == &kernels::scalar_ops());
    return;
  }

  SUBCASE("philox_fill is bitwise identical") {
    uint32_t key[2] = {0xcafef00du, 0x5eed5eedu}, stream[2] = {42u, 77u};
    for (std::size_t nb : {1u, 3u, 4u, 7u, 1024u}) {
      std::vector<uint64_t> a(2 * nb), b(2 * nb);
      kernels::scalar_ops().philox_fill(a.data(), nb, key, stream, 1234567);
      avx2->philox_fill(b.data(), nb, key, stream, 1234567);
      CHECK(a == b);
    }
  }

  SUBCASE("float reductions agree to relative 1e-13") {
    for (std::size_t K : {1u, 2u, 3u, 5u, 8u, 16u, 32u, 33u, 128u}) {
      std::vector<double> x = random_vector(2 * K, 1000 + K);
      std::vector<double> w(K);
      for (std::size_t k = 0; k < K; ++k) w[k] = static_cast<double>((k + 1) * (k + 1));

      double s1 = kernels::scalar_ops().sum_sq(x.data(), x.size());
      double s2 = avx2->sum_sq(x.data(), x.size());
      CHECK(s2 == doctest::Approx(s1).epsilon(1e-13));

      double w1 = kernels::scalar_ops().weighted_pair_sq(x.data(), w.data(), K);
      double w2 = avx2->weighted_pair_sq(x.data(), w.data(), K);
      CHECK(w2 == doctest::Approx(w1).epsilon(1e-13));

      double h1 = kernels::scalar_ops().h3_sum(x.data(), K);
      double h2 = avx2->h3_sum(x.data(), K);
      CHECK(h2 == doctest::Approx(h1).epsilon(5e-13));

      std::vector<double> xa = x, xb = x;
      kernels::scalar_ops().scale_pairs(xa.data(), w.data(), K);
      avx2->scale_pairs(xb.data(), w.data(), K);
      CHECK(xa == xb);
    }
  }

  SUBCASE("zig_fast is bitwise identical, including the stop position") {
    std::vector<double> w(256);
    std::vector<uint64_t> k(256);
    for (int i = 0; i < 256; ++i) {
      w[i] = (i + 1) * 0x1.0p-53;
      k[i] = static_cast<uint64_t>(0.988 * 0x1.0p53);
    }
    RngStream rng(321);
    for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 64u, 1000u}) {
      std::vector<uint64_t> u(n);
      for (uint64_t& v : u) v = rng.next_u64();
      std::vector<double> oa(n, -7.0), ob(n, -7.0);
      std::size_t ca = kernels::scalar_ops().zig_fast(u.data(), n, oa.data(), w.data(), k.data());
      std::size_t cb = avx2->zig_fast(u.data(), n, ob.data(), w.data(), k.data());
      CHECK(ca == cb);
      CHECK(oa == ob);
    }

    // 53-bit magnitude boundary converts exactly in both variants
    std::vector<uint64_t> kk(256, 1ull << 53);
    uint64_t edge[4];
    for (int i = 0; i < 4; ++i) edge[i] = (((1ull << 53) - 1) << 11) | (i << 9) | (i & 1) << 8 | i;
    double ea[4], eb[4];
    CHECK(kernels::scalar_ops().zig_fast(edge, 4, ea, w.data(), kk.data()) == 4);
    CHECK(avx2->zig_fast(edge, 4, eb, w.data(), kk.data()) == 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(ea[i] == eb[i]);
      CHECK(std::abs(ea[i]) == 0x1.fffffffffffffp52 * w[i]);
    }
  }
}

TEST_CASE("zig_fast stops at the first draw over its layer threshold") {
  std::vector<double> w(256, 0.5 * 0x1.0p-53);
  std::vector<uint64_t> k(256, 1ull << 53);
  k[9] = 1ull << 20;

  std::vector<uint64_t> u(13);
  RngStream rng(55);
  for (uint64_t& v : u) v = (rng.next_u64() | 512u) & ~255ull;  // layer 0 variants avoided
  u[7] = ((1ull << 21) << 11) | 9u;  // over threshold on layer 9

  for (const kernels::Ops* ops : {&kernels::scalar_ops(), kernels::avx2_ops()}) {
    if (ops == nullptr) continue;
    std::vector<double> out(u.size(), -7.0);
    CHECK(ops->zig_fast(u.data(), u.size(), out.data(), w.data(), k.data()) == 7);
    for (int i = 0; i < 7; ++i) {
      uint64_t j = u[i] >> 11;
      double expect = static_cast<double>(j) * w[u[i] & 255u];
      if (u[i] & 256u) expect = -expect;
      CHECK(out[i] == expect);
    }
    CHECK(out[7] == -7.0);
  }
}

TEST_CASE("h3_sum reproduces a hand-expanded K=3 value") {
  // a = (1, 2, 3), b = (4, 5, 6), u_k = a_k - i b_k
  // n=2: A = 1-16 = -15, B = 4+4 = 8 -> 2*(-15) + 5*8 = 10
  // n=3: A = (1*2-4*5)+(2*1-5*4) = -36, B = (1*5+4*2)+(2*4+5*1) = 26
  //      -> 3*(-36) + 6*26 = 48
  std::vector<double> x = {1, 2, 3, 4, 5, 6};
  CHECK(kernels::scalar_ops().h3_sum(x.data(), 3) == doctest::Approx(58.0).epsilon(1e-15));
}

TEST_CASE("h3_sum is cubically homogeneous") {
  for (std::size_t K : {2u, 8u, 16u}) {
    std::vector<double> x = random_vector(2 * K, 55 + K);
    std::vector<double> x2 = x;
    const double c = 1.7;
    for (double& v : x2) v *= c;
    double t1 = kernels::active_ops().h3_sum(x.data(), K);
    double t2 = kernels::active_ops().h3_sum(x2.data(), K);
    CHECK(t2 == doctest::Approx(c * c * c * t1).epsilon(1e-12));
  }
}

TEST_CASE("sum_sq and weighted_pair_sq match straightforward sums") {
  std::vector<double> x = {0.5, -1.5, 2.0, 0.25};
  CHECK(kernels::scalar_ops().sum_sq(x.data(), 4) == doctest::Approx(6.5625).epsilon(1e-15));
  std::vector<double> w = {1.0, 4.0};
  // 1*(0.25+4) + 4*(2.25+0.0625) = 4.25 + 9.25 = 13.5
  CHECK(kernels::scalar_ops().weighted_pair_sq(x.data(), w.data(), 2) ==
        doctest::Approx(13.5).epsilon(1e-15));
}
