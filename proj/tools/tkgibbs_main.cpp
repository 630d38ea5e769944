#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tkgibbs/hamiltonian.hpp"
#include "tkgibbs/io.hpp"
#include "tkgibbs/kernels.hpp"
#include "tkgibbs/proposal.hpp"
#include "tkgibbs/rejection.hpp"
#include "tkgibbs/rng.hpp"
#include "tkgibbs/spectral.hpp"
#include "tkgibbs/stats.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace tkgibbs;

namespace {

struct RunConfig {
  int K = 16;
  double energy = 1.0;
  double beta_prime = 0.0;
  double nonlin_ratio = 0.0;
  uint64_t samples = 0;
  uint64_t max_proposals = 0;
  uint64_t seed = 1;
  unsigned workers = 1;
  int grid = 0;
  int bins = 81;
  std::string out;
  std::string format = "json";
  bool naive = false;
  bool spectra = false;

  ModelParams params() const { return ModelParams{K, energy, beta_prime, nonlin_ratio}; }
  fs::path outdir() const { return fs::path(out); }
};

std::string default_outdir() {
  const char* env = std::getenv("TKGIBBS_OUTDIR");
  return env && *env ? env : ".";
}

void add_model_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--K", cfg.K, "mode cutoff");
  cmd->add_option("--energy", cfg.energy, "fixed total energy E0");
  cmd->add_option("--beta-prime", cfg.beta_prime, "normalized inverse temperature");
  cmd->add_option("--nonlin-ratio", cfg.nonlin_ratio, "cubic-to-quadratic coefficient ratio");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--out", cfg.out, "output directory (default $TKGIBBS_OUTDIR or .)");
}

Heartbeat progress_logger() {
  return [](uint64_t proposed, uint64_t accepted) {
    std::fprintf(stderr, "progress: proposals=%llu accepts=%llu\n",
                 static_cast<unsigned long long>(proposed),
                 static_cast<unsigned long long>(accepted));
    std::fflush(stderr);
  };
}

ordered_json params_json(const ModelParams& p) {
  return ordered_json{
      {"K", p.K}, {"energy", p.E0}, {"beta_prime", p.beta_prime}, {"nonlin_ratio", p.nonlin_ratio}};
}

void write_json(const fs::path& path, const ordered_json& j) {
  io::write_text_file(path, j.dump(2) + "\n");
}

StopRule stop_rule(const RunConfig& cfg, uint64_t default_samples) {
  StopRule stop{cfg.samples, cfg.max_proposals, true};
  if (stop.target_accepts == 0 && stop.max_proposals == 0) stop.target_accepts = default_samples;
  return stop;
}

int cmd_sample(const RunConfig& cfg) {
  ModelParams p = cfg.params();
  p.validate();
  fs::create_directories(cfg.outdir());
  if (cfg.format != "json" && cfg.format != "csv")
    throw usage_error("--format must be json or csv");

  auto t0 = std::chrono::steady_clock::now();
  RejectionSetup setup = make_setup(p, cfg.naive ? ProposalMode::naive : ProposalMode::improved);
  SampleBatch batch = run_parallel(setup, stop_rule(cfg, 1000), cfg.seed, cfg.workers,
                                   progress_logger());
  EnsembleStats st = ensemble_stats(batch, p, cfg.grid, cfg.bins);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  io::write_histogram_csv(cfg.outdir() / "histogram.csv", st);
  io::write_power_csv(cfg.outdir() / "power.csv", st);
  if (cfg.spectra) io::write_spectra_csv(cfg.outdir() / "spectra.csv", batch, p.E0);

  ordered_json stats{{"schema_version", 1},
                     {"skewness", st.skewness},
                     {"skewness_per_field", st.skewness_per_field},
                     {"excess_kurtosis", st.excess_kurtosis},
                     {"n_samples", st.n_samples},
                     {"n_pooled", st.n_pooled},
                     {"sigma_ref", st.sigma_ref},
                     {"four_sigma", st.four_sigma}};
  if (cfg.format == "json") {
    write_json(cfg.outdir() / "stats.json", stats);
  } else {
    std::string csv = "key,value\n";
    for (auto& [key, value] : stats.items())
      csv += key + "," +
             (value.is_number_float() ? io::format_g17(value.get<double>()) : value.dump()) + "\n";
    io::write_text_file(cfg.outdir() / "stats.csv", csv);
  }

  ordered_json meta{{"schema_version", 1},
                    {"subcommand", "sample"},
                    {"params", params_json(p)},
                    {"mode", to_string(setup.mode)},
                    {"alpha_star", setup.proposal.alpha_star},
                    {"log_M", setup.log_M},
                    {"seed", batch.seed},
                    {"workers", cfg.workers},
                    {"n_grid", cfg.grid == 0 ? 2 * p.K : cfg.grid},
                    {"bins", cfg.bins},
                    {"target_samples", cfg.samples},
                    {"max_proposals", cfg.max_proposals},
                    {"n_proposed", batch.n_proposed},
                    {"n_accepted", batch.n_accepted},
                    {"acceptance_rate", batch.acceptance_rate},
                    {"kernel", kernels::active_ops().name},
                    {"wall_time_seconds", wall}};
  write_json(cfg.outdir() / "metadata.json", meta);

  std::printf("accepted %llu of %llu proposals (rate %s); results in %s\n",
              static_cast<unsigned long long>(batch.n_accepted),
              static_cast<unsigned long long>(batch.n_proposed),
              io::format_g17(batch.acceptance_rate).c_str(), cfg.out.c_str());
  return 0;
}

int cmd_bench(const RunConfig& cfg, const std::vector<std::string>& rows,
              uint64_t improved_proposals, uint64_t naive_proposals, uint64_t skew_samples) {
  if (rows.empty()) throw usage_error("bench needs at least one beta':ratio row");
  if (skew_samples < 2) throw usage_error("bench needs at least 2 skewness samples");
  fs::create_directories(cfg.outdir());

  std::string csv =
      "beta_prime,nonlin_ratio,skewness,improved_rate,naive_rate,improvement_factor,censored\n";
  uint64_t seed = cfg.seed;
  for (const std::string& row : rows) {
    auto colon = row.find(':');
    if (colon == std::string::npos)
      throw usage_error("row '" + row + "' is not of the form beta':ratio");
    ModelParams p{cfg.K, cfg.energy, std::stod(row.substr(0, colon)),
                  std::stod(row.substr(colon + 1))};
    p.validate();

    ImprovementResult imp = measure_improvement(p, improved_proposals, naive_proposals, seed);
    RejectionSetup setup = make_setup(p, ProposalMode::improved);
    SampleBatch batch =
        run_parallel(setup, StopRule{skew_samples, 0, true}, seed + 1, cfg.workers,
                     progress_logger());
    EnsembleStats st = ensemble_stats(batch, p, cfg.grid, cfg.bins);

    csv += io::format_g17(p.beta_prime) + "," + io::format_g17(p.nonlin_ratio) + "," +
           io::format_g17(st.skewness) + "," + io::format_g17(imp.improved_rate) + "," +
           io::format_g17(imp.naive_rate) + "," + io::format_g17(imp.factor) + "," +
           (imp.censored ? "1" : "0") + "\n";
    uint64_t s = seed;
    seed = detail::splitmix64(s);
  }
  io::write_text_file(cfg.outdir() / "bench.csv", csv);
  std::fputs(csv.c_str(), stdout);
  return 0;
}

int cmd_speedup(const RunConfig& cfg, std::vector<unsigned> workers_list,
                uint64_t proposals_per_worker) {
  if (workers_list.empty()) throw usage_error("speedup needs a worker list");
  fs::create_directories(cfg.outdir());
  ModelParams p = cfg.params();
  p.validate();

  RejectionSetup setup = make_setup(p, cfg.naive ? ProposalMode::naive : ProposalMode::improved);
  auto throughput = [&](unsigned w) {
    StopRule stop{0, w * proposals_per_worker, false};
    auto t0 = std::chrono::steady_clock::now();
    run_parallel(setup, stop, cfg.seed, w);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::pair<double, double>(wall, static_cast<double>(w) * proposals_per_worker / wall);
  };

  double base = throughput(1).second;
  std::string csv = "workers,wall_time_seconds,speedup\n";
  for (unsigned w : workers_list) {
    auto [wall, tput] = throughput(w);
    csv += std::to_string(w) + "," + io::format_g17(wall) + "," + io::format_g17(tput / base) +
           "\n";
  }
  io::write_text_file(cfg.outdir() / "speedup.csv", csv);
  std::fputs(csv.c_str(), stdout);
  return 0;
}

int cmd_validate(const RunConfig& cfg, uint64_t trials) {
  if (trials == 0) throw usage_error("validation needs at least 1 trial");
  fs::create_directories(cfg.outdir());
  RngStream rng(cfg.seed);
  double max_h2 = 0.0, max_h3 = 0.0;
  for (uint64_t i = 0; i < trials; ++i) {
    double t1 = 2.0 * M_PI * rng.uniform01();
    double t2 = 2.0 * M_PI * rng.uniform01();
    double ph = 0.5 * M_PI * rng.uniform01();
    Spectrum s = sphere_to_spectrum(two_mode_point(t1, t2, ph), cfg.energy);
    max_h2 = std::max(max_h2, std::abs(h2(s) - h2_exact_2mode(t1, t2, ph, cfg.energy)));
    max_h3 = std::max(max_h3, std::abs(h3(s) - h3_exact_2mode(t1, t2, ph, cfg.energy)));
  }
  const double tol = 1e-12;
  bool pass = max_h2 <= tol && max_h3 <= tol;
  ordered_json report{{"schema_version", 1}, {"trials", trials},
                      {"max_h2_error", max_h2}, {"max_h3_error", max_h3},
                      {"tolerance", tol},      {"pass", pass}};
  write_json(cfg.outdir() / "validate.json", report);
  std::printf("max |h2 - exact| = %s, max |h3 - exact| = %s over %llu trials\n",
              io::format_g17(max_h2).c_str(), io::format_g17(max_h3).c_str(),
              static_cast<unsigned long long>(trials));
  if (!pass) throw numerical_error("two-mode comparison exceeded the 1e-12 tolerance");
  return 0;
}

int cmd_extreme(const RunConfig& cfg) {
  ModelParams p = cfg.params();
  p.validate();
  fs::create_directories(cfg.outdir());

  RejectionSetup setup = make_setup(p, cfg.naive ? ProposalMode::naive : ProposalMode::improved);
  SampleBatch batch =
      run_parallel(setup, stop_rule(cfg, 500), cfg.seed, cfg.workers, progress_logger());
  ExtremeEvent ev = extreme_event(batch, p, cfg.grid);

  io::write_field_csv(cfg.outdir() / "field.csv", ev.field);
  ordered_json meta{{"schema_version", 1},
                    {"subcommand", "extreme"},
                    {"params", params_json(p)},
                    {"seed", batch.seed},
                    {"n_samples", batch.accepted.size()},
                    {"n_proposed", batch.n_proposed},
                    {"acceptance_rate", batch.acceptance_rate},
                    {"sample_index", ev.sample_index},
                    {"max_u", ev.max_u},
                    {"four_sigma", ev.four_sigma},
                    {"exceeds_4sigma", ev.exceeds_4sigma},
                    {"exceedance_pct", ev.exceedance_pct},
                    {"grid_cap", displacement_cap(p.K, p.E0)}};
  write_json(cfg.outdir() / "extreme.json", meta);
  std::printf("max displacement %s against threshold %s (%s%%)\n", io::format_g17(ev.max_u).c_str(),
              io::format_g17(ev.four_sigma).c_str(), io::format_g17(ev.exceedance_pct).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs-ensemble wave-field sampler for the truncated KdV equation"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.out = default_outdir();

  CLI::App* sample = app.add_subcommand("sample", "draw an ensemble and write its statistics");
  add_model_flags(sample, cfg);
  sample->add_option("--samples", cfg.samples, "accepted samples to draw");
  sample->add_option("--max-proposals", cfg.max_proposals, "proposal budget cap");
  sample->add_option("--workers", cfg.workers, "parallel workers");
  sample->add_option("--grid", cfg.grid, "grid points per field (default 2K)");
  sample->add_option("--bins", cfg.bins, "histogram bins");
  sample->add_option("--format", cfg.format, "stats file format: json or csv");
  sample->add_flag("--spectra", cfg.spectra, "also write every accepted spectrum");
  sample->add_flag("--naive", cfg.naive, "use the spectrally uniform proposal");

  std::vector<std::string> rows;
  uint64_t improved_proposals = 100000, naive_proposals = 1000000, skew_samples = 2000;
  CLI::App* bench = app.add_subcommand("bench", "acceptance-rate comparison table");
  add_model_flags(bench, cfg);
  bench->add_option("--rows", rows, "comma-separated beta':ratio pairs")->delimiter(',');
  bench->add_option("--improved-proposals", improved_proposals, "budget per improved run");
  bench->add_option("--naive-proposals", naive_proposals, "budget per naive run");
  bench->add_option("--skew-samples", skew_samples, "accepted samples for the skewness column");
  bench->add_option("--workers", cfg.workers, "parallel workers");

  std::vector<unsigned> workers_list{1, 2, 4, 8};
  uint64_t proposals_per_worker = 10000;
  CLI::App* speedup = app.add_subcommand("speedup", "weak-scaling throughput table");
  add_model_flags(speedup, cfg);
  speedup->add_option("--workers-list", workers_list, "worker counts to time")->delimiter(',');
  speedup->add_option("--proposals-per-worker", proposals_per_worker, "proposals per worker");
  speedup->add_flag("--naive", cfg.naive, "use the spectrally uniform proposal");

  uint64_t trials = 10000;
  CLI::App* validate = app.add_subcommand("validate", "two-mode exact-Hamiltonian comparison");
  add_model_flags(validate, cfg);
  validate->add_option("--trials", trials, "random angle triples to compare");

  CLI::App* extreme = app.add_subcommand("extreme", "largest-displacement field of an ensemble");
  add_model_flags(extreme, cfg);
  extreme->add_option("--samples", cfg.samples, "accepted samples to draw");
  extreme->add_option("--max-proposals", cfg.max_proposals, "proposal budget cap");
  extreme->add_option("--workers", cfg.workers, "parallel workers");
  extreme->add_option("--grid", cfg.grid, "grid points per field (default 2K)");
  extreme->add_flag("--naive", cfg.naive, "use the spectrally uniform proposal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(cfg);
    if (bench->parsed())
      return cmd_bench(cfg, rows, improved_proposals, naive_proposals, skew_samples);
    if (speedup->parsed()) return cmd_speedup(cfg, workers_list, proposals_per_worker);
    if (validate->parsed()) return cmd_validate(cfg, trials);
    if (extreme->parsed()) return cmd_extreme(cfg);
  } catch (const MViolationError& e) {
    std::fprintf(stderr, "error: %s\noffending point:", e.what());
    for (double v : e.point().coords) std::fprintf(stderr, " %s", io::format_g17(v).c_str());
    std::fprintf(stderr, "\n");
    return e.exit_code();
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
