#pragma once

#include <vector>

#include "tkgibbs/rng.hpp"
#include "tkgibbs/types.hpp"

namespace tkgibbs {

// F(alpha) = 1 - (alpha/K) * sum_k 1 / (1 + alpha beta' k^2 / K^3); the
// proposal anisotropy alpha* is its root.
double F(double alpha, int K, double beta_prime);

// Root of F with |F| <= 1e-12, by doubling bracket expansion plus bisection
// refined with secant steps. Returns exactly 1 for beta' = 0. For (K, beta')
// with K^2 sum_k 1/k^2 <= beta' no root exists (F stays positive); alpha* is
// then taken as 1, which keeps the sampler exact and matches the measure the
// anisotropy approximates in the large-K limit.
double solve_alpha_star(int K, double beta_prime);

// True when F has a root, i.e. beta' < K^2 * sum_{k=1}^{K} 1/k^2.
bool alpha_star_root_exists(int K, double beta_prime);

struct ProposalParams {
  double alpha_star = 1.0;
  std::vector<double> sigmas;  // sigma_k^2 = 1 / (1 + alpha* beta' k^2 / K^3)
  int K = 0;
  double beta_prime = 0.0;

  static ProposalParams build(const ModelParams& p);
};

// Draws X with independent Normal(0, sigma_k^2) pairs and projects to the
// sphere; the result follows the proposal density g.
SpherePoint sample_proposal(const ProposalParams& pp, RngStream& rng);

// log g up to its additive constant:
//   -K log(1 + (alpha* beta'/K^3) sum_k k^2 (x_k^2 + x_{K+k}^2))
double log_g(const SpherePoint& x, const ProposalParams& pp);

// log(f/g) up to an additive constant, composed literally from
// beta_hamiltonian and the g sum. Reference path; the sampler uses
// LogRatioEval.
double log_ratio_f_over_g(const SpherePoint& x, const ModelParams& p, const ProposalParams& pp);

// Scale-invariant evaluator for the rejection loop: computes the log ratio
// of f to the proposal at x/|x| directly from an unnormalized vector using
// the active kernels. In naive mode the proposal is the uniform measure and
// the value reduces to -beta_hamiltonian.
class LogRatioEval {
public:
  LogRatioEval(const ModelParams& p, const ProposalParams& pp, bool naive);

  // x has length 2K, nsq = |x|^2 (pass 1 for unit vectors).
  double eval_raw(const double* x, double nsq) const;
  double eval_vector(const std::vector<double>& x) const;
  double operator()(const SpherePoint& x) const { return eval_raw(x.coords.data(), 1.0); }

  const std::vector<double>& mode_weights() const { return w2_; }
  bool naive() const { return naive_; }

private:
  int K_;
  bool naive_;
  double bp_over_K2_;   // beta'/K^2, multiplies the h2 sum on the sphere
  double coef3_;        // (beta' r / K^2) sqrt(E0 / 2pi), multiplies the cubic sum
  double cg_;           // alpha* beta' / K^3, the g-sum coefficient
  bool need_h3_;
  std::vector<double> w2_;  // k^2 weights
};

}  // namespace tkgibbs
