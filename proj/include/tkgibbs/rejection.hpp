#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tkgibbs/proposal.hpp"
#include "tkgibbs/types.hpp"

namespace tkgibbs {

enum class ProposalMode { improved, naive };

const char* to_string(ProposalMode mode);

// Immutable precomputation shared read-only by all workers: the proposal,
// the log rejection constant and the maximizer it was found at.
struct RejectionSetup {
  ModelParams params;
  ProposalParams proposal;
  double log_M = 0.0;
  SpherePoint argmax;
  ProposalMode mode = ProposalMode::improved;
};

struct SampleBatch {
  std::vector<SpherePoint> accepted;  // empty when the stop rule drops samples
  uint64_t n_proposed = 0;
  uint64_t n_accepted = 0;
  double acceptance_rate = 0.0;
  uint64_t seed = 0;
  uint32_t worker_id = 0;
};

// Stop when either bound is reached; zero means unbounded. At least one
// bound must be set. keep_samples = false counts accepts without storing
// them (rate measurement runs).
struct StopRule {
  uint64_t target_accepts = 0;
  uint64_t max_proposals = 0;
  bool keep_samples = true;
};

// Raised when a proposal's log ratio exceeds log_M + 1e-9: the optimizer
// missed the supremum and the run is aborted rather than biased.
class MViolationError : public Error {
public:
  MViolationError(SpherePoint point, double log_ratio, double log_M);

  const SpherePoint& point() const { return point_; }
  double log_ratio() const { return log_ratio_; }
  double log_M() const { return log_M_; }

private:
  SpherePoint point_;
  double log_ratio_;
  double log_M_;
};

// Nelder-Mead maximization of the log acceptance ratio over the
// unconstrained 2K-vector (the objective projects internally), seeded at
// the Dirichlet kernel and restarted from the best point with a fresh
// simplex until a converged restart stops improving; log_M is the best
// value found. Round-off-level excesses at the maximizer are absorbed by
// the violation tolerance of the sampling loop.
RejectionSetup find_rejection_constant(const ModelParams& p, const ProposalParams& pp,
                                       ProposalMode mode);

// Convenience: build the proposal and the setup in one step.
RejectionSetup make_setup(const ModelParams& p, ProposalMode mode);

// Invoked roughly every 10^8 proposals on long runs.
using Heartbeat = std::function<void(uint64_t n_proposed, uint64_t n_accepted)>;

// Serial rejection loop: draw from the proposal, accept with probability
// exp(log_ratio - log_M). Deterministic in (seed, worker_id).
SampleBatch run_sampler(const RejectionSetup& setup, StopRule stop, uint64_t seed,
                        uint32_t worker_id = 0, const Heartbeat& heartbeat = {});

// One independent loop per worker with streams derived from (seed,
// worker_id); per-worker quotas split the stop rule deterministically and
// batches merge in worker order, so results do not depend on scheduling.
// workers = 1 is bitwise identical to run_sampler.
SampleBatch run_parallel(const RejectionSetup& setup, StopRule stop, uint64_t seed,
                         unsigned workers, const Heartbeat& heartbeat = {});

struct ImprovementResult {
  double improved_rate = 0.0;
  double naive_rate = 0.0;
  double factor = 0.0;
  bool censored = false;  // fewer than 100 naive accepts; factor is a bound/noisy
  uint64_t improved_accepts = 0, improved_proposals = 0;
  uint64_t naive_accepts = 0, naive_proposals = 0;
  double improved_log_M = 0.0, naive_log_M = 0.0;
};

// Acceptance-rate ratio of the improved proposal over the naive one under
// identical model parameters and fixed proposal budgets. With zero naive
// accepts the naive rate is replaced by 1/budget and the censored flag set
// (the factor is then a lower-bound estimate).
ImprovementResult measure_improvement(const ModelParams& p, uint64_t improved_proposals,
                                      uint64_t naive_proposals, uint64_t seed);

}  // namespace tkgibbs
