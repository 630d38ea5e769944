#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tkgibbs {

// Process exit codes: 0 success, 2 usage, 3 numerical, 4 insufficient data.
enum class Errc : int { usage = 2, numerical = 3, insufficient_data = 4 };

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

private:
  Errc code_;
};

inline Error usage_error(const std::string& what) { return Error(Errc::usage, what); }
inline Error numerical_error(const std::string& what) { return Error(Errc::numerical, what); }
inline Error insufficient_data_error(const std::string& what) {
  return Error(Errc::insufficient_data, what);
}

// The four control parameters that fully determine the target measure.
struct ModelParams {
  int K = 1;               // cutoff wavenumber
  double E0 = 1.0;         // total energy
  double beta_prime = 0.0; // normalized inverse temperature
  double nonlin_ratio = 0.0;

  // Throws a usage error on K < 1, E0 <= 0, beta_prime < 0 or nonlin_ratio < 0.
  void validate() const;
};

// Unit vector on S^{2K-1}. coords[k-1] is the real slot of mode k,
// coords[K+k-1] the imaginary slot.
struct SpherePoint {
  std::vector<double> coords;

  int K() const { return static_cast<int>(coords.size() / 2); }
  double norm() const;

  // Accepts a vector whose norm deviates from 1 by at most 1e-9 and
  // renormalizes it; larger deviations raise a numerical error.
  static SpherePoint from_unit(std::vector<double> x);
};

// Fourier modes u_hat_1..u_hat_K. Negative modes are the conjugates and are
// never stored; the zero mode vanishes by zero momentum.
struct Spectrum {
  std::vector<std::complex<double>> modes;

  int K() const { return static_cast<int>(modes.size()); }
};

// Surface displacement sampled on a uniform grid in [-pi, pi).
struct WaveField {
  std::vector<double> xi;
  std::vector<double> u;
};

struct HamiltonianValue {
  double h2 = 0.0;
  double h3 = 0.0;
  double beta_h = 0.0;
};

}  // namespace tkgibbs
