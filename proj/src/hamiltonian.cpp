#include "tkgibbs/hamiltonian.hpp"

#include <cmath>
#include <vector>

#include "tkgibbs/kernels.hpp"
#include "tkgibbs/spectral.hpp"

namespace tkgibbs {

double h2(const Spectrum& s) {
  double sum = 0.0;
  for (int k = 1; k <= s.K(); ++k) sum += static_cast<double>(k) * k * std::norm(s.modes[k - 1]);
  return 2.0 * M_PI * sum;
}

double h3(const Spectrum& s) {
  // The kernel form works on the half-split vector (a, b) with
  // u_hat = a - i b, so b is the negated imaginary part.
  int K = s.K();
  std::vector<double> packed(2 * K);
  for (int k = 0; k < K; ++k) {
    packed[k] = s.modes[k].real();
    packed[K + k] = -s.modes[k].imag();
  }
  return 2.0 * M_PI * kernels::active_ops().h3_sum(packed.data(), K);
}

double beta_hamiltonian(const ModelParams& p, const Spectrum& s) {
  p.validate();
  if (s.K() != p.K) throw numerical_error("spectrum length does not match K");
  double e = energy(s);
  if (std::abs(e - p.E0) > 1e-8 * p.E0)
    throw numerical_error("spectrum energy deviates from E0 beyond tolerance");
  return p.beta_prime / (p.E0 * p.K * p.K) * (h2(s) - p.nonlin_ratio * h3(s));
}

HamiltonianValue hamiltonian(const ModelParams& p, const Spectrum& s) {
  HamiltonianValue v;
  v.h2 = h2(s);
  v.h3 = h3(s);
  v.beta_h = p.beta_prime / (p.E0 * p.K * p.K) * (v.h2 - p.nonlin_ratio * v.h3);
  return v;
}

double h2_exact_2mode(double theta1, double theta2, double phi, double E0) {
  (void)theta1;
  (void)theta2;
  double c = std::sqrt(E0 / (2.0 * M_PI));
  double r1 = c * std::cos(phi), r2 = c * std::sin(phi);
  return 2.0 * M_PI * (r1 * r1 + 4.0 * r2 * r2);
}

double h3_exact_2mode(double theta1, double theta2, double phi, double E0) {
  double c = std::sqrt(E0 / (2.0 * M_PI));
  double r1 = c * std::cos(phi), r2 = c * std::sin(phi);
  return 2.0 * M_PI * r2 * r1 * r1 * std::cos(2.0 * theta1 - theta2);
}

SpherePoint two_mode_point(double theta1, double theta2, double phi) {
  SpherePoint p;
  p.coords = {std::cos(phi) * std::cos(theta1), std::sin(phi) * std::cos(theta2),
              -std::cos(phi) * std::sin(theta1), -std::sin(phi) * std::sin(theta2)};
  return p;
}

}  // namespace tkgibbs
