#pragma once

#include "tkgibbs/types.hpp"

namespace tkgibbs {

// 2pi * sum k^2 |u_hat_k|^2
double h2(const Spectrum& s);

// 2pi * sum_{n=1}^{K} Re( conj(u_hat_n) * sum_{k=1}^{n-1} u_hat_k u_hat_{n-k} ),
// the O(K^2) double-summation form.
double h3(const Spectrum& s);

// (beta' / (E0 K^2)) * (h2 - (C3/C2) h3). Requires energy(s) = E0 within
// 1e-8 relative.
double beta_hamiltonian(const ModelParams& p, const Spectrum& s);

HamiltonianValue hamiltonian(const ModelParams& p, const Spectrum& s);

// Closed forms for the K = 2 state with amplitudes R1 = sqrt(E0/2pi) cos(phi),
// R2 = sqrt(E0/2pi) sin(phi) and phases theta1, theta2.
double h2_exact_2mode(double theta1, double theta2, double phi, double E0);
double h3_exact_2mode(double theta1, double theta2, double phi, double E0);

// The K = 2 sphere point with those amplitudes and phases.
SpherePoint two_mode_point(double theta1, double theta2, double phi);

}  // namespace tkgibbs
