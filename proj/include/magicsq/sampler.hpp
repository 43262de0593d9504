#ifndef MAGICSQ_SAMPLER_HPP
#define MAGICSQ_SAMPLER_HPP

#include <random>
#include <utility>

#include "magicsq/types.hpp"

namespace magicsq {

using Rng = std::mt19937_64;

// Zero-sum direction matrix for the hit-and-run line.
struct Direction {
  int n = 0;
  std::vector<double> d;  // row-major, entries sum to 0
  double norm = 0.0;      // Frobenius norm, diagnostics only
};

struct ChainConfig {
  int burn_in_steps = 50;
  int knots = 32;                   // >= 4
  std::uint64_t rng_seed = 0;       // informational; generators are passed in
  double positivity_margin = 1e-12; // entries stay above margin/n^2
  bool metropolis = false;          // exact-target accept/reject diagnostic
};

// Uniform point of the simplex: i.i.d. standard exponentials, normalized.
SimplexMatrix sample_uniform_simplex(Rng& rng, int n);

// Centered i.i.d. standard Gaussian matrix (n >= 2); degenerate draws resampled.
Direction random_direction(Rng& rng, int n);

// Maximal open tau-interval with all entries of X + tau L above
// margin * (1/n^2). Requires interior X; tau_minus < 0 < tau_plus.
std::pair<double, double> segment_in_simplex(const SimplexMatrix& x, const Direction& l,
                                             double margin);

// One chord resample: piecewise-linear interpolation of ln psi_s at `knots`
// equally spaced points, exact sampling from the resulting piecewise
// exponential density. With cfg.metropolis, an accept/reject step against the
// exact target using the interpolant as proposal.
SimplexMatrix sample_on_segment(const SimplexMatrix& x, const Direction& l, double s,
                                const ChainConfig& cfg, Rng& rng);

// One hit-and-run kernel application: direction, chord, chord resample.
SimplexMatrix hit_and_run_step(const SimplexMatrix& x, double s, const ChainConfig& cfg, Rng& rng);

// State after cfg.burn_in_steps kernel applications from x0.
SimplexMatrix hit_and_run_chain(SimplexMatrix x0, double s, const ChainConfig& cfg, Rng& rng);

}  // namespace magicsq

#endif
