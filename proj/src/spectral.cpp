#include "tkgibbs/spectral.hpp"

#include <cmath>

namespace tkgibbs {

void ModelParams::validate() const {
  if (K < 1) throw usage_error("K must be a positive integer");
  if (!(E0 > 0.0)) throw usage_error("energy must be positive");
  if (!(beta_prime >= 0.0)) throw usage_error("beta-prime must be non-negative");
  if (!(nonlin_ratio >= 0.0)) throw usage_error("nonlin-ratio must be non-negative");
}

double SpherePoint::norm() const {
  double s = 0.0;
  for (double c : coords) s += c * c;
  return std::sqrt(s);
}

SpherePoint SpherePoint::from_unit(std::vector<double> x) {
  if (x.empty() || x.size() % 2 != 0)
    throw numerical_error("sphere point needs an even, positive number of coordinates");
  SpherePoint p{std::move(x)};
  double n = p.norm();
  if (std::abs(n - 1.0) > 1e-9)
    throw numerical_error("sphere point norm deviates from 1 by more than 1e-9");
  for (double& c : p.coords) c /= n;
  return p;
}

Spectrum sphere_to_spectrum(const SpherePoint& x, double E0) {
  SpherePoint unit = SpherePoint::from_unit(x.coords);
  int K = unit.K();
  double c = std::sqrt(E0 / (2.0 * M_PI));
  Spectrum s;
  s.modes.resize(K);
  for (int k = 0; k < K; ++k)
    s.modes[k] = std::complex<double>(c * unit.coords[k], -c * unit.coords[K + k]);
  return s;
}

double energy(const Spectrum& s) {
  double sum = 0.0;
  for (const auto& m : s.modes) sum += std::norm(m);
  return 2.0 * M_PI * sum;
}

WaveField spectrum_to_field(const Spectrum& s, int n_grid) {
  int K = s.K();
  if (n_grid < 2 * K) throw usage_error("grid must have at least 2K points");
  WaveField f;
  f.xi.resize(n_grid);
  f.u.assign(n_grid, 0.0);
  for (int j = 0; j < n_grid; ++j) f.xi[j] = -M_PI + 2.0 * M_PI * j / n_grid;
  for (int j = 0; j < n_grid; ++j) {
    double u = 0.0;
    for (int k = 1; k <= K; ++k) {
      double a = 2.0 * s.modes[k - 1].real();
      double b = -2.0 * s.modes[k - 1].imag();
      u += a * std::cos(k * f.xi[j]) + b * std::sin(k * f.xi[j]);
    }
    f.u[j] = u;
  }
  return f;
}

SpherePoint project_to_sphere(const std::vector<double>& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  if (!(s > 0.0)) throw numerical_error("cannot project a zero vector to the sphere");
  double inv = 1.0 / std::sqrt(s);
  SpherePoint p{x};
  for (double& c : p.coords) c *= inv;
  return p;
}

SpherePoint dirichlet_kernel(int K, double E0) {
  ModelParams{K, E0, 0.0, 0.0}.validate();
  SpherePoint p;
  p.coords.assign(2 * K, 0.0);
  double v = 1.0 / std::sqrt(static_cast<double>(K));
  for (int k = 0; k < K; ++k) p.coords[k] = v;
  return p;
}

double displacement_cap(int K, double E0) { return std::sqrt(2.0 * E0 * K / M_PI); }

}  // namespace tkgibbs
