#include "tkgibbs/proposal.hpp"

#include <cmath>

#include "tkgibbs/kernels.hpp"
#include "tkgibbs/hamiltonian.hpp"
#include "tkgibbs/spectral.hpp"

namespace tkgibbs {

double F(double alpha, int K, double beta_prime) {
  double K3 = static_cast<double>(K) * K * K;
  double sum = 0.0;
  for (int k = 1; k <= K; ++k)
    sum += 1.0 / (1.0 + alpha * beta_prime * k * k / K3);
  return 1.0 - alpha / K * sum;
}

bool alpha_star_root_exists(int K, double beta_prime) {
  if (beta_prime == 0.0) return true;
  double inv_sq = 0.0;
  for (int k = 1; k <= K; ++k) inv_sq += 1.0 / (static_cast<double>(k) * k);
  return beta_prime < static_cast<double>(K) * K * inv_sq;
}

double solve_alpha_star(int K, double beta_prime) {
  if (K < 1) throw usage_error("K must be a positive integer");
  if (beta_prime < 0.0) throw usage_error("beta-prime must be non-negative");
  if (beta_prime == 0.0) return 1.0;
  if (!alpha_star_root_exists(K, beta_prime)) return 1.0;

  double lo = 0.0, hi = 1.0;
  while (F(hi, K, beta_prime) > 0.0) {
    hi *= 2.0;
    if (hi > 0x1.0p64)
      throw numerical_error("bracket expansion for alpha* exceeded 2^64");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (F(mid, K, beta_prime) > 0.0 ? lo : hi) = mid;
  }
  // secant polish on the final bracket
  double a = lo, b = hi, fa = F(a, K, beta_prime), fb = F(b, K, beta_prime);
  double x = (fa == fb) ? 0.5 * (a + b) : a - fa * (b - a) / (fb - fa);
  if (std::abs(F(x, K, beta_prime)) > 1e-12)
    throw numerical_error("alpha* root refinement missed the 1e-12 residual target");
  return x;
}

ProposalParams ProposalParams::build(const ModelParams& p) {
  p.validate();
  ProposalParams pp;
  pp.K = p.K;
  pp.beta_prime = p.beta_prime;
  pp.alpha_star = solve_alpha_star(p.K, p.beta_prime);
  pp.sigmas.resize(p.K);
  double K3 = static_cast<double>(p.K) * p.K * p.K;
  for (int k = 1; k <= p.K; ++k)
    pp.sigmas[k - 1] = std::sqrt(1.0 / (1.0 + pp.alpha_star * p.beta_prime * k * k / K3));
  return pp;
}

SpherePoint sample_proposal(const ProposalParams& pp, RngStream& rng) {
  std::vector<double> x(2 * pp.K);
  for (;;) {
    rng.fill_normals(x.data(), x.size());
    kernels::active_ops().scale_pairs(x.data(), pp.sigmas.data(), pp.K);
    double nsq = kernels::active_ops().sum_sq(x.data(), x.size());
    if (nsq > 0.0) {
      double inv = 1.0 / std::sqrt(nsq);
      for (double& c : x) c *= inv;
      return SpherePoint{std::move(x)};
    }
  }
}

double log_g(const SpherePoint& x, const ProposalParams& pp) {
  int K = pp.K;
  double K3 = static_cast<double>(K) * K * K;
  double sum = 0.0;
  for (int k = 1; k <= K; ++k) {
    double a = x.coords[k - 1], b = x.coords[K + k - 1];
    sum += static_cast<double>(k) * k * (a * a + b * b);
  }
  return -K * std::log1p(pp.alpha_star * pp.beta_prime / K3 * sum);
}

double log_ratio_f_over_g(const SpherePoint& x, const ModelParams& p, const ProposalParams& pp) {
  return -beta_hamiltonian(p, sphere_to_spectrum(x, p.E0)) - log_g(x, pp);
}

LogRatioEval::LogRatioEval(const ModelParams& p, const ProposalParams& pp, bool naive)
    : K_(p.K), naive_(naive) {
  p.validate();
  double K2 = static_cast<double>(p.K) * p.K;
  bp_over_K2_ = p.beta_prime / K2;
  coef3_ = p.beta_prime * p.nonlin_ratio / K2 * std::sqrt(p.E0 / (2.0 * M_PI));
  cg_ = naive ? 0.0 : pp.alpha_star * p.beta_prime / (K2 * p.K);
  need_h3_ = p.beta_prime > 0.0 && p.nonlin_ratio > 0.0;
  w2_.resize(p.K);
  for (int k = 1; k <= p.K; ++k) w2_[k - 1] = static_cast<double>(k) * k;
}

double LogRatioEval::eval_raw(const double* x, double nsq) const {
  const kernels::Ops& ops = kernels::active_ops();
  double s_hat = ops.weighted_pair_sq(x, w2_.data(), K_) / nsq;
  double v = -bp_over_K2_ * s_hat;
  if (need_h3_) v += coef3_ * ops.h3_sum(x, K_) / (nsq * std::sqrt(nsq));
  if (!naive_) v += K_ * std::log1p(cg_ * s_hat);
  return v;
}

double LogRatioEval::eval_vector(const std::vector<double>& x) const {
  double nsq = kernels::active_ops().sum_sq(x.data(), x.size());
  if (!(nsq > 0.0)) return -1e300;
  return eval_raw(x.data(), nsq);
}

}  // namespace tkgibbs
