#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "magicsq/density.hpp"
#include "magicsq/estimator.hpp"
#include "magicsq/exact.hpp"
#include "magicsq/formulas.hpp"
#include "magicsq/types.hpp"
#include "magicsq/validate.hpp"

namespace {

using namespace magicsq;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitSizeCap = 3;
constexpr int kExitNumeric = 4;

Margins read_margins_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open margins file " + path);
  std::string line;
  Margins m;
  auto parse_line = [&](std::vector<long long>& dst) {
    if (!std::getline(in, line)) throw std::invalid_argument("margins file needs two lines");
    std::istringstream ss(line);
    long long v;
    while (ss >> v) dst.push_back(v);
  };
  parse_line(m.row_sums);
  parse_line(m.col_sums);
  m.check();
  return m;
}

void emit(const json& doc, const std::string& output_path, const std::string& summary) {
  if (!output_path.empty()) {
    std::ofstream out(output_path);
    if (!out) throw std::runtime_error("cannot open output file " + output_path);
    out << doc.dump(2) << '\n';
  } else {
    std::cout << doc.dump(2) << '\n';
  }
  std::cout << summary << '\n';
}

struct Options {
  int n = 2;
  long long t = 1;
  std::string margins_file;
  std::string output_path;
  std::string state_path;
  bool resume = false;
  bool unclipped = false;
  std::uint64_t seed = 1;
  long long extend_t = 0;
  EstimatorParams params;
};

Margins resolve_margins(const Options& opt) {
  if (!opt.margins_file.empty()) return read_margins_file(opt.margins_file);
  return Margins::magic(opt.n, opt.t);
}

json report_doc(const EstimateReport& r, const std::string& command) {
  json j = json::parse(report_to_json(r));
  j["command"] = command;
  const double l10 = r.log_count_estimate / std::log(10.0);
  j["mantissa"] = std::pow(10.0, l10 - std::floor(l10));
  j["exponent10"] = static_cast<long long>(std::floor(l10));
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Monte Carlo counting of magic squares and contingency tables"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool sampling) {
    cmd->add_option("--n", opt.n, "matrix side length");
    cmd->add_option("--t", opt.t, "line sum");
    cmd->add_option("--output", opt.output_path, "report output path (default stdout)");
    if (sampling) {
      cmd->add_option("--seed", opt.seed, "master RNG seed");
      cmd->add_option("--step", opt.params.schedule_step, "annealing schedule step");
      cmd->add_option("--samples", opt.params.samples_per_stage, "samples per stage");
      cmd->add_option("--chains", opt.params.chains, "chains per stage");
      cmd->add_option("--s1-samples", opt.params.s1_samples, "uniform samples for S1");
      cmd->add_option("--burn-in", opt.params.burn_in, "hit-and-run burn-in steps (0: 50n)");
      cmd->add_option("--thin", opt.params.thin, "steps between retained samples (0: n)");
      cmd->add_option("--knots", opt.params.knots, "knots of the chord log-density");
      cmd->add_option("--beta", opt.params.beta, "threshold exponent: ln T = beta (ln N)^2");
      cmd->add_option("--workers", opt.params.workers, "concurrent chains");
      cmd->add_flag("--metropolis", opt.params.metropolis,
                    "exact-target accept/reject diagnostic");
      cmd->add_option("--state", opt.state_path, "state file (written after each stage)");
      cmd->add_flag("--resume", opt.resume, "reuse completed stages from the state file");
    }
  };

  auto* c_est = app.add_subcommand("estimate", "telescoping estimate of the phi integral");
  add_common(c_est, true);
  auto* c_full = app.add_subcommand("estimate-full",
                                    "full estimator with the clipped p-factor (nt <= 24)");
  add_common(c_full, true);
  c_full->add_option("--full-samples", opt.params.full_samples, "final-stage p samples");
  c_full->add_flag("--unclipped", opt.unclipped, "use T = +inf (no clipping)");
  auto* c_extend = app.add_subcommand("extend", "bootstrap a stored run to a larger t");
  add_common(c_extend, true);
  c_extend->add_option("--to", opt.extend_t, "new line sum")->required();
  auto* c_exact = app.add_subcommand("exact", "exact count by dynamic programming");
  add_common(c_exact, false);
  c_exact->add_option("--margins", opt.margins_file, "margins file (two integer lines)");
  auto* c_heur = app.add_subcommand("heuristic", "Diaconis-Efron and BBK closed forms");
  add_common(c_heur, false);
  c_heur->add_option("--margins", opt.margins_file, "margins file (two integer lines)");
  auto* c_bounds = app.add_subcommand("bounds", "count bounds for magic margins");
  add_common(c_bounds, false);
  auto* c_cmp = app.add_subcommand("compare", "estimate vs exact/heuristic/bounds table");
  add_common(c_cmp, true);
  auto* c_val = app.add_subcommand("validate", "run the fast self-check suite");
  (void)c_val;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (c_est->parsed()) {
    ProblemSpec spec{opt.n, opt.t};
    const auto r = estimate_count_simplified(spec, opt.params, opt.seed, opt.state_path,
                                             opt.resume);
    emit(report_doc(r, "estimate"), opt.output_path,
         "estimate ~ " + format_log_count(r.log_count_estimate));
  } else if (c_full->parsed()) {
    ProblemSpec spec{opt.n, opt.t};
    const double log_t = opt.unclipped
                             ? std::numeric_limits<double>::infinity()
                             : opt.params.beta * std::pow(std::log(static_cast<double>(spec.N())), 2);
    const auto r = estimate_count_full(spec, opt.params, log_t, opt.seed);
    emit(report_doc(r, "estimate-full"), opt.output_path,
         "estimate ~ " + format_log_count(r.log_count_estimate));
  } else if (c_extend->parsed()) {
    if (opt.state_path.empty())
      throw std::invalid_argument("extend: --state is required");
    const auto r = load_and_extend(opt.state_path, opt.extend_t, opt.params, opt.state_path);
    emit(report_doc(r, "extend"), opt.output_path,
         "estimate ~ " + format_log_count(r.log_count_estimate));
  } else if (c_exact->parsed()) {
    const Margins m = resolve_margins(opt);
    const BigCount c = exact_count(m);
    json j{{"command", "exact"},
           {"rowSums", m.row_sums},
           {"colSums", m.col_sums},
           {"count", c.get_str()},
           {"logCount", log_big(c)}};
    emit(j, opt.output_path, c.get_str());
  } else if (c_heur->parsed()) {
    const Margins m = resolve_margins(opt);
    const auto de = de_heuristic(m);
    const auto bbk = bbk_asymptotic(m);
    json j{{"command", "heuristic"},
           {"rowSums", m.row_sums},
           {"colSums", m.col_sums},
           {"logDE", de.log_value},
           {"logBBK", bbk.log_value}};
    emit(j, opt.output_path,
         "DE ~ " + format_log_count(de.log_value) + ", BBK ~ " + format_log_count(bbk.log_value));
  } else if (c_bounds->parsed()) {
    ProblemSpec spec{opt.n, opt.t};
    const auto [lo, hi] = count_bounds(spec);
    json j{{"command", "bounds"},
           {"n", spec.n},
           {"t", spec.t},
           {"logLower", lo.log_value},
           {"logUpper", hi.log_value}};
    emit(j, opt.output_path, "bounds: [" + format_log_count(lo.log_value) + ", " +
                                 format_log_count(hi.log_value) + "]");
  } else if (c_cmp->parsed()) {
    ProblemSpec spec{opt.n, opt.t};
    const auto r = estimate_count_simplified(spec, opt.params, opt.seed);
    json j = report_doc(r, "compare");
    const Margins m = Margins::magic(opt.n, opt.t);
    try {
      const BigCount c = exact_count(m, 20000000ULL);
      j["exact"] = c.get_str();
      j["logExact"] = log_big(c);
    } catch (const size_error&) {
      j["exact"] = nullptr;
    }
    j["logDE"] = de_heuristic(m).log_value;
    j["logBBK"] = bbk_asymptotic(m).log_value;
    const auto [lo, hi] = count_bounds(spec);
    j["logBoundLower"] = lo.log_value;
    j["logBoundUpper"] = hi.log_value;
    std::string summary = "estimate ~ " + format_log_count(r.log_count_estimate);
    if (j.contains("logExact")) summary += ", exact = " + format_log_count(j["logExact"]);
    summary += ", DE ~ " + format_log_count(j["logDE"]);
    summary += ", BBK ~ " + format_log_count(j["logBBK"]);
    emit(j, opt.output_path, summary);
  } else {
    // validate
    const auto results = run_validation();
    bool all = true;
    for (const auto& r : results) {
      std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name;
      if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
      std::cout << '\n';
      all = all && r.passed;
    }
    if (!all) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const magicsq::size_error& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return kExitSizeCap;
  } catch (const magicsq::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
