#pragma once

#include "tkgibbs/types.hpp"

namespace tkgibbs {

// u_hat_k = sqrt(E0/2pi) * (x_k - i x_{K+k}); energy(result) = E0.
Spectrum sphere_to_spectrum(const SpherePoint& x, double E0);

// 2pi * sum |u_hat_k|^2
double energy(const Spectrum& s);

// u(xi_j) = sum_k a_k cos(k xi_j) + b_k sin(k xi_j) with a_k = 2 Re u_hat_k,
// b_k = -2 Im u_hat_k, on the uniform grid xi_j = -pi + 2pi j / n_grid.
// Requires n_grid >= 2K.
WaveField spectrum_to_field(const Spectrum& s, int n_grid);

// x / |x|; zero vectors raise a numerical error.
SpherePoint project_to_sphere(const std::vector<double>& x);

// Constant-spectrum state x_k = 1/sqrt(K) for k <= K, zeros above; the
// skewness-maximizing spike used to seed the rejection-constant search.
SpherePoint dirichlet_kernel(int K, double E0);

// Largest possible grid displacement for given (K, E0): the Dirichlet-kernel
// peak sqrt(2 E0 K / pi), a Cauchy-Schwarz bound over the whole sphere.
double displacement_cap(int K, double E0);

}  // namespace tkgibbs
