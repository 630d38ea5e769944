#pragma once

#include <cstdint>
#include <vector>

#include "tkgibbs/rejection.hpp"
#include "tkgibbs/types.hpp"

namespace tkgibbs {

struct EnsembleStats {
  double skewness = 0.0;            // m3 / m2^{3/2} of the pooled grid values
  double skewness_per_field = 0.0;  // mean of per-field skewnesses (comparison estimator)
  double excess_kurtosis = 0.0;     // m4 / m2^2 - 3 of the pooled grid values
  std::vector<double> bin_edges;    // bins + 1 edges spanning +-(u_cap + 0.5)
  std::vector<int64_t> counts;
  std::vector<double> mean_power;   // ensemble average of |u_hat_k|^2 per mode
  uint64_t n_samples = 0;
  uint64_t n_pooled = 0;
  double sigma_ref = 0.0;   // sqrt(E0/pi)
  double four_sigma = 0.0;  // 4 * sigma_ref
};

// Pools every grid displacement across the accepted fields. n_grid = 0
// defaults to 2K. Requires at least 2 accepted samples.
EnsembleStats ensemble_stats(const SampleBatch& batch, const ModelParams& p, int n_grid = 0,
                             int bins = 81);

struct ExtremeEvent {
  WaveField field;
  double max_u = 0.0;
  bool exceeds_4sigma = false;
  uint64_t sample_index = 0;
  double four_sigma = 0.0;
  double exceedance_pct = 0.0;  // percentage of max_u above the threshold
};

// The accepted field with the largest positive grid displacement. Requires
// at least 1 accepted sample.
ExtremeEvent extreme_event(const SampleBatch& batch, const ModelParams& p, int n_grid = 0);

}  // namespace tkgibbs
