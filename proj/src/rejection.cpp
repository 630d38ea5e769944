#include "tkgibbs/rejection.hpp"

#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "tkgibbs/kernels.hpp"
#include "tkgibbs/nelder_mead.hpp"
#include "tkgibbs/rng.hpp"
#include "tkgibbs/spectral.hpp"

namespace tkgibbs {
namespace {

constexpr double kViolationTol = 1e-9;
constexpr uint64_t kHeartbeatMask = (1ull << 27) - 1;

std::string violation_message(double log_ratio, double log_M) {
  std::ostringstream os;
  os.precision(17);
  os << "proposal log ratio " << log_ratio << " exceeds log_M " << log_M
     << "; the rejection constant is not an upper bound, re-optimize from the reported point";
  return os.str();
}

}  // namespace

const char* to_string(ProposalMode mode) {
  return mode == ProposalMode::improved ? "improved" : "naive";
}

MViolationError::MViolationError(SpherePoint point, double log_ratio, double log_M)
    : Error(Errc::numerical, violation_message(log_ratio, log_M)),
      point_(std::move(point)),
      log_ratio_(log_ratio),
      log_M_(log_M) {}

RejectionSetup find_rejection_constant(const ModelParams& p, const ProposalParams& pp,
                                       ProposalMode mode) {
  p.validate();
  LogRatioEval eval(p, pp, mode == ProposalMode::naive);
  auto objective = [&eval](const std::vector<double>& x) { return eval.eval_vector(x); };

  const double step = 0.05, tol = 1e-10;
  const int max_iters = 200 * p.K;
  const int max_legs = 64;

  // Restart from the best point (projected back to the sphere, where the
  // scale-invariant objective lives) with a fresh simplex until a converged
  // leg stops improving. A single pass can terminate on a degenerate simplex
  // well below the supremum, which the next fresh simplex escapes; stopping
  // only at a stable converged value makes log_M a true upper bound.
  NelderMeadResult best;
  std::vector<double> x0 = dirichlet_kernel(p.K, p.E0).coords;
  double prev = -1e300;
  bool stable = false;
  for (int leg = 0; leg < max_legs; ++leg) {
    NelderMeadResult r = nelder_mead_maximize(objective, x0, step, tol, max_iters);
    if (leg == 0 || r.best_value > best.best_value) best = r;
    x0 = project_to_sphere(r.best_x).coords;
    if (r.converged && r.best_value <= prev + 1e-12) {
      stable = true;
      break;
    }
    prev = std::max(prev, r.best_value);
  }
  if (!stable) {
    std::ostringstream os;
    os.precision(17);
    os << "rejection-constant search did not converge within " << max_iters
       << " iterations per restart; best value found " << best.best_value;
    throw numerical_error(os.str());
  }

  RejectionSetup setup;
  setup.params = p;
  setup.proposal = pp;
  setup.log_M = best.best_value;
  setup.argmax = project_to_sphere(best.best_x);
  setup.mode = mode;
  return setup;
}

RejectionSetup make_setup(const ModelParams& p, ProposalMode mode) {
  return find_rejection_constant(p, ProposalParams::build(p), mode);
}

SampleBatch run_sampler(const RejectionSetup& setup, StopRule stop, uint64_t seed,
                        uint32_t worker_id, const Heartbeat& heartbeat) {
  if (stop.target_accepts == 0 && stop.max_proposals == 0)
    throw usage_error("stop rule needs a target accept count or a proposal budget");

  const ModelParams& p = setup.params;
  const bool naive = setup.mode == ProposalMode::naive;
  LogRatioEval eval(p, setup.proposal, naive);
  const kernels::Ops& ops = kernels::active_ops();
  RngStream rng(seed, worker_id);

  SampleBatch batch;
  batch.seed = seed;
  batch.worker_id = worker_id;
  if (stop.keep_samples)
    batch.accepted.reserve(stop.target_accepts != 0 ? stop.target_accepts : 1024);

  std::vector<double> x(2 * p.K);
  const double* sig = setup.proposal.sigmas.data();
  const double log_M = setup.log_M;

  while (true) {
    if (stop.target_accepts != 0 && batch.n_accepted >= stop.target_accepts) break;
    if (stop.max_proposals != 0 && batch.n_proposed >= stop.max_proposals) break;

    rng.fill_normals(x.data(), x.size());
    if (!naive) ops.scale_pairs(x.data(), sig, p.K);
    double nsq = ops.sum_sq(x.data(), x.size());
    double u = rng.uniform01();
    ++batch.n_proposed;
    if (!(nsq > 0.0)) continue;  // zero draw, redraw (probability-zero event)

    double d = eval.eval_raw(x.data(), nsq) - log_M;
    if (d > kViolationTol) throw MViolationError(project_to_sphere(x), d + log_M, log_M);

    bool accept;
    if (d >= 0.0)
      accept = true;
    else if (d > -36.8)
      // u * (1 - d + 0.499 d^2) >= 1 implies u >= exp(d) with margin far above
      // round-off, so most rejections skip the exp
      accept = u * (1.0 - d + 0.499 * d * d) < 1.0 && u < std::exp(d);
    else
      accept = u == 0.0 && u < std::exp(d);  // 53-bit u below this needs u = 0

    if (accept) {
      ++batch.n_accepted;
      if (stop.keep_samples) batch.accepted.push_back(project_to_sphere(x));
    }
    if (heartbeat && (batch.n_proposed & kHeartbeatMask) == 0)
      heartbeat(batch.n_proposed, batch.n_accepted);
  }
  batch.acceptance_rate =
      batch.n_proposed == 0 ? 0.0 : static_cast<double>(batch.n_accepted) / batch.n_proposed;
  return batch;
}

SampleBatch run_parallel(const RejectionSetup& setup, StopRule stop, uint64_t seed,
                         unsigned workers, const Heartbeat& heartbeat) {
  if (workers == 0) throw usage_error("worker count must be at least 1");
  if (workers == 1) return run_sampler(setup, stop, seed, 0, heartbeat);
  if (stop.target_accepts == 0 && stop.max_proposals == 0)
    throw usage_error("stop rule needs a target accept count or a proposal budget");

  auto quota = [workers](uint64_t total, unsigned w) -> uint64_t {
    if (total == 0) return 0;
    return total / workers + (w < total % workers ? 1 : 0);
  };

  std::vector<SampleBatch> parts(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        StopRule local{quota(stop.target_accepts, w), quota(stop.max_proposals, w),
                       stop.keep_samples};
        if (local.target_accepts == 0 && local.max_proposals == 0) return;  // no work share
        parts[w] = run_sampler(setup, local, seed, w, w == 0 ? heartbeat : Heartbeat{});
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SampleBatch merged;
  merged.seed = seed;
  merged.worker_id = 0;
  for (auto& part : parts) {
    merged.n_proposed += part.n_proposed;
    merged.n_accepted += part.n_accepted;
    for (auto& s : part.accepted) merged.accepted.push_back(std::move(s));
  }
  merged.acceptance_rate =
      merged.n_proposed == 0 ? 0.0 : static_cast<double>(merged.n_accepted) / merged.n_proposed;
  return merged;
}

ImprovementResult measure_improvement(const ModelParams& p, uint64_t improved_proposals,
                                      uint64_t naive_proposals, uint64_t seed) {
  if (improved_proposals == 0 || naive_proposals == 0)
    throw usage_error("improvement measurement needs positive proposal budgets");

  ImprovementResult res;
  res.improved_proposals = improved_proposals;
  res.naive_proposals = naive_proposals;

  RejectionSetup improved = make_setup(p, ProposalMode::improved);
  res.improved_log_M = improved.log_M;
  SampleBatch ib = run_sampler(improved, StopRule{0, improved_proposals, false}, seed);
  res.improved_accepts = ib.n_accepted;
  res.improved_rate = ib.acceptance_rate;

  uint64_t s = seed;
  uint64_t naive_seed = detail::splitmix64(s);
  RejectionSetup naive = make_setup(p, ProposalMode::naive);
  res.naive_log_M = naive.log_M;
  SampleBatch nb = run_sampler(naive, StopRule{0, naive_proposals, false}, naive_seed);
  res.naive_accepts = nb.n_accepted;
  res.naive_rate = nb.acceptance_rate;

  res.censored = nb.n_accepted < 100;
  double naive_rate = nb.n_accepted == 0 ? 1.0 / naive_proposals : nb.acceptance_rate;
  res.factor = res.improved_rate / naive_rate;
  return res;
}

}  // namespace tkgibbs
