#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "tkgibbs/rejection.hpp"
#include "tkgibbs/rng.hpp"
#include "tkgibbs/spectral.hpp"
#include "tkgibbs/stats.hpp"

using namespace tkgibbs;

namespace {

SampleBatch uniform_batch(int K, int n, uint64_t seed) {
  ModelParams p{K, 1.0, 0.0, 0.0};
  RejectionSetup s = make_setup(p, ProposalMode::improved);
  SampleBatch b = run_sampler(s, StopRule{static_cast<uint64_t>(n), 0, true}, seed);
  return b;
}

}  // namespace

TEST_CASE("pooled statistics match a direct recomputation") {
  const int K = 3, n_grid = 12, bins = 5;
  ModelParams p{K, 1.6, 0.0, 0.0};
  SampleBatch b;
  b.accepted.push_back(project_to_sphere({1, 2, 3, 4, 5, 6}));
  b.accepted.push_back(project_to_sphere({-1, 1, 0.5, 2, -2, 1}));
  b.accepted.push_back(dirichlet_kernel(K, p.E0));
  b.n_accepted = 3;
  b.n_proposed = 3;

  EnsembleStats st = ensemble_stats(b, p, n_grid, bins);

  std::vector<double> pooled;
  std::vector<double> power(K, 0.0);
  for (const SpherePoint& s : b.accepted) {
    WaveField f = spectrum_to_field(sphere_to_spectrum(s, p.E0), n_grid);
    pooled.insert(pooled.end(), f.u.begin(), f.u.end());
    for (int k = 0; k < K; ++k)
      power[k] += p.E0 / (2.0 * M_PI) *
                  (s.coords[k] * s.coords[k] + s.coords[K + k] * s.coords[K + k]) / 3.0;
  }
  double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / pooled.size();
  double m2 = 0, m3 = 0, m4 = 0;
  for (double u : pooled) {
    double d = u - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= pooled.size();
  m3 /= pooled.size();
  m4 /= pooled.size();

  CHECK(st.n_samples == 3);
  CHECK(st.n_pooled == pooled.size());
  CHECK(st.skewness == doctest::Approx(m3 / std::pow(m2, 1.5)).epsilon(1e-14));
  CHECK(st.excess_kurtosis == doctest::Approx(m4 / (m2 * m2) - 3.0).epsilon(1e-14));
  for (int k = 0; k < K; ++k)
    CHECK(st.mean_power[k] == doctest::Approx(power[k]).epsilon(1e-13));

  double lim = displacement_cap(K, p.E0) + 0.5;
  REQUIRE(st.bin_edges.size() == bins + 1);
  CHECK(st.bin_edges.front() == doctest::Approx(-lim).epsilon(1e-14));
  CHECK(st.bin_edges.back() == doctest::Approx(lim).epsilon(1e-14));
  int64_t total = std::accumulate(st.counts.begin(), st.counts.end(), int64_t{0});
  CHECK(static_cast<uint64_t>(total) == st.n_pooled);

  std::vector<int64_t> counts(bins, 0);
  for (double u : pooled) {
    int idx = static_cast<int>((u + lim) / (2.0 * lim) * bins);
    ++counts[std::min(std::max(idx, 0), bins - 1)];
  }
  for (int i = 0; i < bins; ++i) CHECK(st.counts[i] == counts[i]);

  CHECK(st.sigma_ref == doctest::Approx(std::sqrt(p.E0 / M_PI)).epsilon(1e-15));
  CHECK(st.four_sigma == doctest::Approx(4.0 * st.sigma_ref).epsilon(1e-15));
}

TEST_CASE("free ensembles are near-Gaussian with the finite-size kurtosis") {
  // At beta' = 0 the measure is uniform on the sphere and each grid value is
  // a projected coordinate: excess kurtosis -6/(2K+2), skewness 0.
  ModelParams p64{64, 1.0, 0.0, 0.0};
  EnsembleStats s64 = ensemble_stats(uniform_batch(64, 4000, 71), p64);
  CHECK(std::abs(s64.skewness) < 0.05);
  CHECK(std::abs(s64.excess_kurtosis) < 0.1);
  CHECK(s64.excess_kurtosis == doctest::Approx(-6.0 / 130.0).epsilon(0.6));

  ModelParams p16{16, 1.0, 0.0, 0.0};
  EnsembleStats s16 = ensemble_stats(uniform_batch(16, 4000, 72), p16);
  CHECK(std::abs(s16.skewness) < 0.05);
  CHECK(s16.excess_kurtosis == doctest::Approx(-6.0 / 34.0).epsilon(0.15));
}

TEST_CASE("mode powers are flat at beta'=0 and sum to the energy") {
  const int K = 16;
  ModelParams p{K, 2.0, 0.0, 0.0};
  SampleBatch b;
  RngStream rng(73);
  for (int i = 0; i < 4000; ++i) {
    std::vector<double> x(2 * K);
    rng.fill_normals(x.data(), x.size());
    b.accepted.push_back(project_to_sphere(x));
  }
  b.n_accepted = b.accepted.size();
  b.n_proposed = b.accepted.size();
  EnsembleStats st = ensemble_stats(b, p);
  double expect = p.E0 / (2.0 * M_PI * K);
  double total = 0.0;
  for (double v : st.mean_power) {
    CHECK(v == doctest::Approx(expect).epsilon(0.15));
    total += v;
  }
  CHECK(total == doctest::Approx(p.E0 / (2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("small batches are rejected as insufficient") {
  ModelParams p{4, 1.0, 0.0, 0.0};
  SampleBatch empty;
  try {
    ensemble_stats(empty, p);
    FAIL("expected an insufficient-data error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_data);
  }
  CHECK_THROWS_AS(extreme_event(empty, p), Error);

  SampleBatch one;
  one.accepted.push_back(dirichlet_kernel(4, 1.0));
  one.n_accepted = 1;
  CHECK_THROWS_AS(ensemble_stats(one, p), Error);
  CHECK_NOTHROW(extreme_event(one, p));
}

TEST_CASE("histogram and grid arguments are validated") {
  ModelParams p{4, 1.0, 0.0, 0.0};
  SampleBatch b;
  b.accepted.push_back(dirichlet_kernel(4, 1.0));
  b.accepted.push_back(project_to_sphere({1, 1, 1, 1, 1, 1, 1, 1}));
  b.n_accepted = 2;
  CHECK_THROWS_AS(ensemble_stats(b, p, 7), Error);   // < 2K grid points
  CHECK_THROWS_AS(ensemble_stats(b, p, 0, 0), Error);
  CHECK_NOTHROW(ensemble_stats(b, p, 8));

  SampleBatch mismatched = b;
  mismatched.accepted.push_back(dirichlet_kernel(5, 1.0));
  CHECK_THROWS_AS(ensemble_stats(mismatched, p), Error);
}

TEST_CASE("the extreme event is the constant-spectrum peak") {
  const int K = 16;
  ModelParams p{K, 1.0, 0.0, 0.0};
  RngStream rng(74);
  SampleBatch b;
  std::vector<double> x(2 * K);
  rng.fill_normals(x.data(), x.size());
  b.accepted.push_back(project_to_sphere(x));
  b.accepted.push_back(dirichlet_kernel(K, p.E0));
  b.n_accepted = 2;

  ExtremeEvent ev = extreme_event(b, p, 64);
  double cap = displacement_cap(K, p.E0);
  CHECK(ev.sample_index == 1);
  CHECK(ev.max_u == doctest::Approx(cap).epsilon(1e-12));
  CHECK(ev.exceeds_4sigma);
  CHECK(ev.four_sigma == doctest::Approx(4.0 * std::sqrt(p.E0 / M_PI)).epsilon(1e-15));
  CHECK(ev.exceedance_pct == doctest::Approx((cap / ev.four_sigma - 1.0) * 100.0).epsilon(1e-10));
  CHECK(ev.field.u.size() == 64);

  // A two-mode state cannot reach the threshold: its cap is below 4 sigma.
  ModelParams p2{2, 1.0, 0.0, 0.0};
  SampleBatch b2;
  b2.accepted.push_back(dirichlet_kernel(2, 1.0));
  b2.n_accepted = 1;
  ExtremeEvent ev2 = extreme_event(b2, p2);
  CHECK(!ev2.exceeds_4sigma);
  CHECK(ev2.exceedance_pct < 0.0);
}

TEST_CASE("no displacement ever exceeds the cap") {
  SampleBatch b = uniform_batch(16, 500, 75);
  ModelParams p{16, 1.0, 0.0, 0.0};
  ExtremeEvent ev = extreme_event(b, p, 128);
  CHECK(ev.max_u <= displacement_cap(16, 1.0) * (1.0 + 1e-12));
}
