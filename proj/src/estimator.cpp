#include "magicsq/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>

#include <json.hpp>

#include "magicsq/density.hpp"
#include "magicsq/scaling.hpp"

namespace magicsq {

using nlohmann::json;

Schedule build_schedule(long long t, double step) {
  if (t < 1) throw std::invalid_argument("build_schedule: t >= 1");
  if (!(step > 0.0) || step > static_cast<double>(t))
    throw std::invalid_argument("build_schedule: step must be in (0, t]");
  Schedule s;
  for (double e = step; e < static_cast<double>(t) - 1e-9; e += step)
    s.exponents.push_back(e);
  s.exponents.push_back(static_cast<double>(t));
  return s;
}

namespace {

constexpr std::uint64_t kS1Tag = 0;
constexpr std::uint64_t kStageTagBase = 1;     // stage i uses tag i+1
constexpr std::uint64_t kPbarTag = 1u << 20;   // final-stage p sampling

double sample_variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

double weight_ess(const std::vector<double>& logs) {
  const double m = *std::max_element(logs.begin(), logs.end());
  double s = 0.0, s2 = 0.0;
  for (double v : logs) {
    const double w = std::exp(v - m);
    s += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

// Run fn(chain_index) for every chain, at most `workers` concurrently.
// Results are only written per-chain, so scheduling cannot affect them.
void for_each_chain(int chains, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, chains));
  if (workers == 1) {
    for (int c = 0; c < chains; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int c = w; c < chains; c += workers) fn(c);
    });
  for (auto& th : pool) th.join();
}

// Per-chain sampling loop shared by the ratio and pbar estimators: burn in,
// then record `count` values of `observe` with `thin` kernel steps between.
std::vector<double> run_chain(int n, double target_exponent, long long count,
                              const EstimatorParams& params, std::uint64_t seed) {
  Rng rng(seed);
  ChainConfig cfg;
  cfg.burn_in_steps = params.effective_burn_in(n);
  cfg.knots = params.knots;
  cfg.rng_seed = seed;
  cfg.positivity_margin = params.positivity_margin;
  cfg.metropolis = params.metropolis;

  SimplexMatrix x = sample_uniform_simplex(rng, n);
  if (n > 1) x = hit_and_run_chain(x, target_exponent, cfg, rng);
  const int thin = params.effective_thin(n);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long k = 0; k < count; ++k) {
    for (int s = 0; s < thin && n > 1; ++s) x = hit_and_run_step(x, target_exponent, cfg, rng);
    out.push_back(log_sigma(x));
  }
  return out;
}

// Combined log-mean over chains plus its leave-one-chain-out jackknife SE.
std::pair<double, double> combine_chains(const std::vector<std::vector<double>>& per_chain) {
  const int C = static_cast<int>(per_chain.size());
  std::vector<double> chain_lse(C);
  double m = kNegInf;
  long long total = 0;
  for (int c = 0; c < C; ++c) {
    chain_lse[c] = log_sum_exp(per_chain[c]);
    m = std::max(m, chain_lse[c]);
    total += static_cast<long long>(per_chain[c].size());
  }
  double wsum = 0.0;
  std::vector<double> w(C);
  for (int c = 0; c < C; ++c) {
    w[c] = std::exp(chain_lse[c] - m);
    wsum += w[c];
  }
  const double log_mean = m + std::log(wsum) - std::log(static_cast<double>(total));

  if (C < 2) return {log_mean, 0.0};
  std::vector<double> loo(C);
  double loo_mean = 0.0;
  for (int c = 0; c < C; ++c) {
    const long long rest = total - static_cast<long long>(per_chain[c].size());
    const double num = std::max(wsum - w[c], 1e-300);
    loo[c] = m + std::log(num) - std::log(static_cast<double>(rest));
    loo_mean += loo[c];
  }
  loo_mean /= C;
  double ss = 0.0;
  for (int c = 0; c < C; ++c) ss += (loo[c] - loo_mean) * (loo[c] - loo_mean);
  const double se = std::sqrt((C - 1.0) / C * ss);
  return {log_mean, se};
}

}  // namespace

std::pair<double, double> estimate_s1(int n, double t1, long long samples, Rng& rng) {
  if (samples < 2) throw std::invalid_argument("estimate_s1: samples >= 2");
  if (n == 1) return {0.0, 0.0};  // sigma is identically 1 on the point simplex

  std::vector<double> logs(static_cast<std::size_t>(samples));
  for (auto& v : logs) v = t1 * log_sigma(sample_uniform_simplex(rng, n));

  const double m = *std::max_element(logs.begin(), logs.end());
  double wsum = 0.0;
  for (double v : logs) wsum += std::exp(v - m);
  const double log_mean = m + std::log(wsum) - std::log(static_cast<double>(samples));

  // Jackknife over samples.
  double loo_mean = 0.0;
  std::vector<double> loo(logs.size());
  for (std::size_t k = 0; k < logs.size(); ++k) {
    const double num = std::max(wsum - std::exp(logs[k] - m), 1e-300);
    loo[k] = m + std::log(num) - std::log(static_cast<double>(samples - 1));
    loo_mean += loo[k];
  }
  loo_mean /= static_cast<double>(samples);
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  const double se = std::sqrt((samples - 1.0) / samples * ss);
  return {log_mean, se};
}

StageEstimate estimate_ratio(int n, double t_lo, double t_hi, const EstimatorParams& params,
                             std::uint64_t master_seed, int stage_index) {
  if (params.samples_per_stage < 2 || params.chains < 1)
    throw std::invalid_argument("estimate_ratio: samples >= 2, chains >= 1");

  StageEstimate st;
  st.index = stage_index;
  st.t_lo = t_lo;
  st.t_hi = t_hi;
  st.samples = params.samples_per_stage;
  if (t_hi == t_lo) return st;  // ratio identically 1

  const double dt = t_hi - t_lo;
  const int C = params.chains;
  std::vector<std::vector<double>> per_chain(C);
  for_each_chain(C, params.workers, [&](int c) {
    long long count = params.samples_per_stage / C + (c < params.samples_per_stage % C ? 1 : 0);
    auto sigmas = run_chain(n, t_lo, count,
                            params, derive_seed(master_seed, kStageTagBase + stage_index, c));
    for (double& v : sigmas) v *= dt;
    per_chain[c] = std::move(sigmas);
  });

  std::vector<double> all;
  for (const auto& v : per_chain) all.insert(all.end(), v.begin(), v.end());
  auto [log_mean, se] = combine_chains(per_chain);
  st.log_ratio_mean = log_mean;
  st.jackknife_se = se;
  st.var_log = sample_variance(all);
  st.ess = weight_ess(all);
  return st;
}

namespace {

void finalize_report(EstimateReport& r) {
  double total = r.log_phi_const + r.log_s1;
  double var = r.s1_se * r.s1_se;
  for (const auto& st : r.stages) {
    total += st.log_ratio_mean;
    var += st.jackknife_se * st.jackknife_se;
  }
  r.log_integral_phi = total;
  r.log_count_estimate = total + (r.log_pbar_mean ? *r.log_pbar_mean : 0.0);
  r.total_log_se = std::sqrt(var);
}

}  // namespace

EstimateReport estimate_count_simplified(const ProblemSpec& spec, const EstimatorParams& params,
                                         std::uint64_t master_seed,
                                         const std::string& state_path, bool resume) {
  spec.check();
  const auto t0 = std::chrono::steady_clock::now();

  EstimateReport r;
  r.spec = spec;
  r.schedule = build_schedule(spec.t, params.schedule_step);
  r.master_seed = master_seed;
  r.params = params;
  r.log_phi_const = log_phi_const(spec);

  std::size_t done_stages = 0;
  bool have_s1 = false;
  if (resume && !state_path.empty()) {
    std::ifstream probe(state_path);
    if (probe.good()) {
      EstimateReport prev = load_state(state_path);
      if (prev.spec.n != spec.n || prev.spec.t != spec.t || prev.master_seed != master_seed ||
          prev.schedule.exponents != r.schedule.exponents)
        throw std::invalid_argument("resume: state file does not match this run");
      r.log_s1 = prev.log_s1;
      r.s1_se = prev.s1_se;
      r.stages = prev.stages;
      done_stages = r.stages.size();
      have_s1 = true;
    }
  }

  if (!have_s1) {
    Rng rng(derive_seed(master_seed, kS1Tag, 0));
    std::tie(r.log_s1, r.s1_se) =
        estimate_s1(spec.n, r.schedule.exponents.front(), params.s1_samples, rng);
    if (!state_path.empty()) {
      finalize_report(r);
      save_state(r, state_path);
    }
  }

  const std::size_t m = r.schedule.exponents.size();
  for (std::size_t i = done_stages; i + 1 < m; ++i) {
    r.stages.push_back(estimate_ratio(spec.n, r.schedule.exponents[i],
                                      r.schedule.exponents[i + 1], params, master_seed,
                                      static_cast<int>(i)));
    if (!state_path.empty()) {
      finalize_report(r);
      save_state(r, state_path);
    }
  }

  finalize_report(r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!state_path.empty()) save_state(r, state_path);
  return r;
}

EstimateReport estimate_count_full(const ProblemSpec& spec, const EstimatorParams& params,
                                   double log_threshold, std::uint64_t master_seed) {
  spec.check();
  if (spec.N() > 24) throw size_error("estimate_count_full: nt > 24");
  const auto t0 = std::chrono::steady_clock::now();

  EstimateReport r = estimate_count_simplified(spec, params, master_seed);

  if (spec.n == 1) {
    // p is identically 1: the full estimate equals the simplified one.
    r.log_pbar_mean = 0.0;
  } else {
    const int C = params.chains;
    std::vector<std::vector<double>> per_chain(C);
    for_each_chain(C, params.workers, [&](int c) {
      const long long count = params.full_samples / C + (c < params.full_samples % C ? 1 : 0);
      Rng rng(derive_seed(master_seed, kPbarTag, c));
      ChainConfig cfg;
      cfg.burn_in_steps = params.effective_burn_in(spec.n);
      cfg.knots = params.knots;
      cfg.positivity_margin = params.positivity_margin;
      cfg.metropolis = params.metropolis;
      SimplexMatrix x = sample_uniform_simplex(rng, spec.n);
      x = hit_and_run_chain(x, static_cast<double>(spec.t), cfg, rng);
      const int thin = params.effective_thin(spec.n);
      std::vector<double>& vals = per_chain[c];
      vals.reserve(static_cast<std::size_t>(count));
      for (long long k = 0; k < count; ++k) {
        for (int s = 0; s < thin; ++s)
          x = hit_and_run_step(x, static_cast<double>(spec.t), cfg, rng);
        vals.push_back(clip_log_p(log_p_exact(x, spec), log_threshold));
      }
    });
    auto [log_mean, se] = combine_chains(per_chain);
    r.log_pbar_mean = log_mean;
    (void)se;
  }

  finalize_report(r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

json params_to_json(const EstimatorParams& p) {
  return json{{"scheduleStep", p.schedule_step},
              {"samplesPerStage", p.samples_per_stage},
              {"chains", p.chains},
              {"s1Samples", p.s1_samples},
              {"burnIn", p.burn_in},
              {"thin", p.thin},
              {"knots", p.knots},
              {"positivityMargin", p.positivity_margin},
              {"metropolis", p.metropolis},
              {"workers", p.workers},
              {"beta", p.beta},
              {"fullSamples", p.full_samples}};
}

EstimatorParams params_from_json(const json& j) {
  EstimatorParams p;
  p.schedule_step = j.at("scheduleStep");
  p.samples_per_stage = j.at("samplesPerStage");
  p.chains = j.at("chains");
  p.s1_samples = j.at("s1Samples");
  p.burn_in = j.at("burnIn");
  p.thin = j.at("thin");
  p.knots = j.at("knots");
  p.positivity_margin = j.at("positivityMargin");
  p.metropolis = j.at("metropolis");
  p.workers = j.at("workers");
  p.beta = j.at("beta");
  p.full_samples = j.at("fullSamples");
  return p;
}

}  // namespace

std::string report_to_json(const EstimateReport& r) {
  json stages = json::array();
  for (const auto& st : r.stages)
    stages.push_back(json{{"i", st.index},
                          {"tLo", st.t_lo},
                          {"tHi", st.t_hi},
                          {"logRatioMean", st.log_ratio_mean},
                          {"var", st.var_log},
                          {"ess", st.ess},
                          {"samples", st.samples},
                          {"se", st.jackknife_se}});
  json j{{"n", r.spec.n},
         {"t", r.spec.t},
         {"schedule", r.schedule.exponents},
         {"logS1", r.log_s1},
         {"s1SE", r.s1_se},
         {"stages", stages},
         {"logPhiConst", r.log_phi_const},
         {"logIntegralPhi", r.log_integral_phi},
         {"logPbarMean", r.log_pbar_mean ? json(*r.log_pbar_mean) : json(nullptr)},
         {"logCountEstimate", r.log_count_estimate},
         {"totalLogSE", r.total_log_se},
         {"masterSeed", r.master_seed},
         {"params", params_to_json(r.params)},
         {"wallSeconds", r.wall_seconds},
         {"version", "magicsq-1.0"}};
  return j.dump(2);
}

EstimateReport report_from_json(const std::string& text) {
  json j = json::parse(text);
  EstimateReport r;
  r.spec.n = j.at("n");
  r.spec.t = j.at("t");
  r.schedule.exponents = j.at("schedule").get<std::vector<double>>();
  r.log_s1 = j.at("logS1");
  r.s1_se = j.at("s1SE");
  for (const auto& js : j.at("stages")) {
    StageEstimate st;
    st.index = js.at("i");
    st.t_lo = js.at("tLo");
    st.t_hi = js.at("tHi");
    st.log_ratio_mean = js.at("logRatioMean");
    st.var_log = js.at("var");
    st.ess = js.at("ess");
    st.samples = js.at("samples");
    st.jackknife_se = js.at("se");
    r.stages.push_back(st);
  }
  r.log_phi_const = j.at("logPhiConst");
  r.log_integral_phi = j.at("logIntegralPhi");
  if (!j.at("logPbarMean").is_null()) r.log_pbar_mean = j.at("logPbarMean").get<double>();
  r.log_count_estimate = j.at("logCountEstimate");
  r.total_log_se = j.at("totalLogSE");
  r.master_seed = j.at("masterSeed");
  r.params = params_from_json(j.at("params"));
  r.wall_seconds = j.at("wallSeconds");
  return r;
}

void save_state(const EstimateReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_state: cannot open " + path);
  out << report_to_json(report) << '\n';
}

EstimateReport load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_state: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return report_from_json(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("load_state: corrupt state file: ") + e.what());
  }
}

EstimateReport load_and_extend(const std::string& path, long long new_t,
                               const EstimatorParams& params,
                               const std::string& out_state_path) {
  EstimateReport prev = load_state(path);
  if (new_t < prev.spec.t)
    throw std::invalid_argument("load_and_extend: new t must be >= stored t");
  if (new_t == prev.spec.t) {
    if (!out_state_path.empty()) save_state(prev, out_state_path);
    return prev;
  }

  const auto t0 = std::chrono::steady_clock::now();
  EstimateReport r = prev;
  r.spec.t = new_t;
  r.params = params;
  r.schedule = build_schedule(new_t, params.schedule_step);
  if (r.schedule.exponents.size() < prev.schedule.exponents.size())
    throw std::invalid_argument("load_and_extend: incompatible schedule");
  for (std::size_t i = 0; i < prev.schedule.exponents.size(); ++i)
    if (std::fabs(r.schedule.exponents[i] - prev.schedule.exponents[i]) > 1e-12)
      throw std::invalid_argument("load_and_extend: stored schedule is not a prefix");

  r.log_phi_const = log_phi_const(r.spec);
  r.log_pbar_mean.reset();
  for (std::size_t i = prev.schedule.exponents.size() - 1; i + 1 < r.schedule.exponents.size();
       ++i) {
    r.stages.push_back(estimate_ratio(r.spec.n, r.schedule.exponents[i],
                                      r.schedule.exponents[i + 1], params, r.master_seed,
                                      static_cast<int>(i)));
    if (!out_state_path.empty()) {
      finalize_report(r);
      save_state(r, out_state_path);
    }
  }
  finalize_report(r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out_state_path.empty()) save_state(r, out_state_path);
  return r;
}

}  // namespace magicsq
