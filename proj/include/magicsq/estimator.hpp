#ifndef MAGICSQ_ESTIMATOR_HPP
#define MAGICSQ_ESTIMATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "magicsq/sampler.hpp"
#include "magicsq/types.hpp"

namespace magicsq {

// Annealing exponents t_1 < t_2 < ... < t_m = t for the telescoping product.
struct Schedule {
  std::vector<double> exponents;
};

// Exponents {min(step,t), 2 step, ...} clipped to end exactly at t.
Schedule build_schedule(long long t, double step = 1.0);

// One telescoping ratio S_{i+1}/S_i estimated under nu_i (density ~ sigma^{t_i}).
struct StageEstimate {
  int index = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double log_ratio_mean = 0.0;  // log of the sample mean of the ratios
  long long samples = 0;
  double var_log = 0.0;         // variance of the per-sample log ratios
  double ess = 0.0;             // (sum w)^2 / sum w^2 of the ratio weights
  double jackknife_se = 0.0;    // of log_ratio_mean, leave-one-chain-out
};

struct EstimatorParams {
  double schedule_step = 1.0;
  long long samples_per_stage = 200;
  int chains = 4;
  long long s1_samples = 10000;
  int burn_in = 0;    // 0 -> 50*n
  int thin = 0;       // steps between retained samples; 0 -> n
  int knots = 32;
  double positivity_margin = 1e-12;
  bool metropolis = false;
  int workers = 1;
  double beta = 2.0;  // threshold exponent: ln T = beta (ln N)^2
  long long full_samples = 10000;  // final-stage samples of pbar (full mode)

  int effective_burn_in(int n) const { return burn_in > 0 ? burn_in : 50 * n; }
  int effective_thin(int n) const { return thin > 0 ? thin : n; }
};

struct EstimateReport {
  ProblemSpec spec;
  Schedule schedule;
  double log_s1 = 0.0;
  double s1_se = 0.0;
  std::vector<StageEstimate> stages;
  double log_phi_const = 0.0;
  double log_integral_phi = 0.0;
  std::optional<double> log_pbar_mean;  // present in full mode
  double log_count_estimate = 0.0;
  double total_log_se = 0.0;  // root-sum-square of S1 and stage errors
  std::uint64_t master_seed = 0;
  EstimatorParams params;
  double wall_seconds = 0.0;
};

// log of the sample mean of psi_{t1} over uniform draws, with the jackknife
// standard error of the log. For n = 1 returns (0, 0) exactly.
std::pair<double, double> estimate_s1(int n, double t1, long long samples, Rng& rng);

// One stage ratio via `chains` independent hit-and-run chains (seeds derived
// from the master seed), ordered cross-chain reduction.
StageEstimate estimate_ratio(int n, double t_lo, double t_hi, const EstimatorParams& params,
                             std::uint64_t master_seed, int stage_index);

// Telescoping estimate of the integral of phi (lower-bound surrogate for the
// count). When state_path is non-empty the state file is rewritten after
// every completed stage; with resume=true completed stages found there are
// not recomputed.
EstimateReport estimate_count_simplified(const ProblemSpec& spec, const EstimatorParams& params,
                                         std::uint64_t master_seed,
                                         const std::string& state_path = "",
                                         bool resume = false);

// Full estimator: simplified integral times the sample mean of the clipped
// p-factor under the phi-weighted measure. Requires nt <= 24.
EstimateReport estimate_count_full(const ProblemSpec& spec, const EstimatorParams& params,
                                   double log_threshold, std::uint64_t master_seed);

void save_state(const EstimateReport& report, const std::string& path);
EstimateReport load_state(const std::string& path);

// Reuses the stored S1 and stage estimates and runs only the stages in
// (t_old, new_t]. new_t == t_old is a no-op returning the stored report.
EstimateReport load_and_extend(const std::string& path, long long new_t,
                               const EstimatorParams& params,
                               const std::string& out_state_path = "");

std::string report_to_json(const EstimateReport& report);
EstimateReport report_from_json(const std::string& text);

}  // namespace magicsq

#endif
