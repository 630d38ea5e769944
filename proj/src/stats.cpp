#include "tkgibbs/stats.hpp"

#include <cmath>

#include "tkgibbs/spectral.hpp"

namespace tkgibbs {
namespace {

int grid_or_default(const ModelParams& p, int n_grid) {
  if (n_grid == 0) return 2 * p.K;
  if (n_grid < 2 * p.K) throw usage_error("grid must have at least 2K points");
  return n_grid;
}

struct Moments {
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

Moments central_moments(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  Moments m;
  for (double x : v) {
    double d = x - mean;
    double d2 = d * d;
    m.m2 += d2;
    m.m3 += d2 * d;
    m.m4 += d2 * d2;
  }
  double n = static_cast<double>(v.size());
  m.m2 /= n;
  m.m3 /= n;
  m.m4 /= n;
  return m;
}

}  // namespace

EnsembleStats ensemble_stats(const SampleBatch& batch, const ModelParams& p, int n_grid,
                             int bins) {
  p.validate();
  if (batch.accepted.size() < 2)
    throw insufficient_data_error("ensemble statistics need at least 2 accepted samples");
  if (bins < 1) throw usage_error("histogram needs at least 1 bin");
  n_grid = grid_or_default(p, n_grid);

  EnsembleStats st;
  st.n_samples = batch.accepted.size();
  st.sigma_ref = std::sqrt(p.E0 / M_PI);
  st.four_sigma = 4.0 * st.sigma_ref;

  const double u_lim = displacement_cap(p.K, p.E0) + 0.5;
  st.bin_edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) st.bin_edges[i] = -u_lim + 2.0 * u_lim * i / bins;
  st.counts.assign(bins, 0);
  st.mean_power.assign(p.K, 0.0);

  std::vector<double> pooled;
  pooled.reserve(batch.accepted.size() * n_grid);
  double per_field_skew_sum = 0.0;

  const double power_scale = p.E0 / (2.0 * M_PI);
  for (const SpherePoint& s : batch.accepted) {
    if (s.K() != p.K) throw numerical_error("sample dimension does not match K");
    WaveField f = spectrum_to_field(sphere_to_spectrum(s, p.E0), n_grid);
    for (double u : f.u) {
      pooled.push_back(u);
      int b = static_cast<int>((u + u_lim) / (2.0 * u_lim) * bins);
      if (b < 0) b = 0;
      if (b >= bins) b = bins - 1;
      ++st.counts[b];
    }
    Moments fm = central_moments(f.u);
    per_field_skew_sum += fm.m2 > 0.0 ? fm.m3 / std::pow(fm.m2, 1.5) : 0.0;
    for (int k = 0; k < p.K; ++k) {
      double a = s.coords[k], b2 = s.coords[p.K + k];
      st.mean_power[k] += power_scale * (a * a + b2 * b2);
    }
  }
  for (double& v : st.mean_power) v /= static_cast<double>(st.n_samples);

  Moments m = central_moments(pooled);
  st.n_pooled = pooled.size();
  st.skewness = m.m2 > 0.0 ? m.m3 / std::pow(m.m2, 1.5) : 0.0;
  st.excess_kurtosis = m.m2 > 0.0 ? m.m4 / (m.m2 * m.m2) - 3.0 : 0.0;
  st.skewness_per_field = per_field_skew_sum / static_cast<double>(st.n_samples);
  return st;
}

ExtremeEvent extreme_event(const SampleBatch& batch, const ModelParams& p, int n_grid) {
  p.validate();
  if (batch.accepted.empty())
    throw insufficient_data_error("extreme-event extraction needs at least 1 accepted sample");
  n_grid = grid_or_default(p, n_grid);

  ExtremeEvent ev;
  ev.four_sigma = 4.0 * std::sqrt(p.E0 / M_PI);
  double best = -1e300;
  uint64_t best_idx = 0;
  for (uint64_t i = 0; i < batch.accepted.size(); ++i) {
    WaveField f = spectrum_to_field(sphere_to_spectrum(batch.accepted[i], p.E0), n_grid);
    for (double u : f.u)
      if (u > best) {
        best = u;
        best_idx = i;
      }
  }
  ev.field = spectrum_to_field(sphere_to_spectrum(batch.accepted[best_idx], p.E0), n_grid);
  ev.max_u = best;
  ev.sample_index = best_idx;
  ev.exceeds_4sigma = best > ev.four_sigma;
  ev.exceedance_pct = (best / ev.four_sigma - 1.0) * 100.0;
  return ev;
}

}  // namespace tkgibbs
