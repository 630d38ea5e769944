#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tkgibbs/hamiltonian.hpp"
#include "tkgibbs/rng.hpp"
#include "tkgibbs/spectral.hpp"

using namespace tkgibbs;

namespace {

SpherePoint random_point(RngStream& rng, int K) {
  std::vector<double> x(2 * K);
  rng.fill_normals(x.data(), x.size());
  return project_to_sphere(x);
}

}  // namespace

TEST_CASE("two-mode closed forms match the general path") {
  RngStream rng(21);
  const double E0 = 1.0;
  for (int i = 0; i < 1000; ++i) {
    double t1 = 2.0 * M_PI * rng.uniform01();
    double t2 = 2.0 * M_PI * rng.uniform01();
    double ph = 0.5 * M_PI * rng.uniform01();
    Spectrum s = sphere_to_spectrum(two_mode_point(t1, t2, ph), E0);
    CHECK(std::abs(h2(s) - h2_exact_2mode(t1, t2, ph, E0)) < 1e-12);
    CHECK(std::abs(h3(s) - h3_exact_2mode(t1, t2, ph, E0)) < 1e-12);
  }
}

TEST_CASE("constant spectrum has the closed-form quadratic energy") {
  const int K = 16;
  const double E0 = 1.0;
  Spectrum s = sphere_to_spectrum(dirichlet_kernel(K, E0), E0);
  // (E0/K) * sum k^2 = (E0/K) * K(K+1)(2K+1)/6
  double expect = E0 / K * (K * (K + 1.0) * (2.0 * K + 1.0) / 6.0);
  CHECK(h2(s) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(expect == doctest::Approx(93.5));
}

TEST_CASE("h2 is even and h3 odd under sign flip") {
  RngStream rng(22);
  for (int K : {3, 16}) {
    SpherePoint x = random_point(rng, K);
    SpherePoint neg = x;
    for (double& v : neg.coords) v = -v;
    Spectrum s = sphere_to_spectrum(x, 1.0), sn = sphere_to_spectrum(neg, 1.0);
    CHECK(h2(sn) == doctest::Approx(h2(s)).epsilon(1e-14));
    CHECK(h3(sn) == doctest::Approx(-h3(s)).epsilon(1e-14));
  }
}

TEST_CASE("h3 and h2 agree with grid integrals of the field") {
  RngStream rng(23);
  for (int K : {2, 5, 16}) {
    const double E0 = 1.4;
    SpherePoint x = random_point(rng, K);
    Spectrum s = sphere_to_spectrum(x, E0);
    const int n = 8 * K;
    WaveField f = spectrum_to_field(s, n);

    // (1/6) integral of u^3; the grid rule is exact for trig polynomials of
    // degree < n.
    double cubic = 0.0;
    for (double u : f.u) cubic += u * u * u;
    cubic *= 2.0 * M_PI / n / 6.0;
    CHECK(h3(s) == doctest::Approx(cubic).epsilon(1e-10));

    // (1/2) integral of (du/dxi)^2 with the derivative taken mode-wise.
    double grad = 0.0;
    for (int j = 0; j < n; ++j) {
      double du = 0.0;
      for (int k = 1; k <= K; ++k) {
        double a = 2.0 * s.modes[k - 1].real(), b = -2.0 * s.modes[k - 1].imag();
        du += k * (b * std::cos(k * f.xi[j]) - a * std::sin(k * f.xi[j]));
      }
      grad += du * du;
    }
    grad *= 2.0 * M_PI / n / 2.0;
    CHECK(h2(s) == doctest::Approx(grad).epsilon(1e-10));
  }
}

TEST_CASE("h2 equals E0 times the mode-weighted coordinate sum") {
  RngStream rng(24);
  const int K = 12;
  const double E0 = 2.0;
  SpherePoint x = random_point(rng, K);
  double weighted = 0.0;
  for (int k = 1; k <= K; ++k)
    weighted += static_cast<double>(k) * k *
                (x.coords[k - 1] * x.coords[k - 1] + x.coords[K + k - 1] * x.coords[K + k - 1]);
  CHECK(h2(sphere_to_spectrum(x, E0)) == doctest::Approx(E0 * weighted).epsilon(1e-13));
}

TEST_CASE("beta_hamiltonian combines the invariants and validates input") {
  RngStream rng(25);
  ModelParams p{16, 1.0, 40.0, 60.0};
  SpherePoint x = random_point(rng, p.K);
  Spectrum s = sphere_to_spectrum(x, p.E0);
  HamiltonianValue v = hamiltonian(p, s);
  double expect = p.beta_prime / (p.E0 * p.K * p.K) * (v.h2 - p.nonlin_ratio * v.h3);
  CHECK(beta_hamiltonian(p, s) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(v.beta_h == doctest::Approx(expect).epsilon(1e-14));

  Spectrum wrong_energy = s;
  for (auto& m : wrong_energy.modes) m *= 1.001;
  try {
    beta_hamiltonian(p, wrong_energy);
    FAIL("expected a numerical error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::numerical);
  }

  Spectrum short_spec;
  short_spec.modes.assign(8, {0.1, 0.0});
  CHECK_THROWS_AS(beta_hamiltonian(p, short_spec), Error);
}
