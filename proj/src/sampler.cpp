#include "magicsq/sampler.hpp"

#include <cassert>
#include <cmath>

#include "magicsq/kernels.hpp"
#include "magicsq/scaling.hpp"

namespace magicsq {

SimplexMatrix sample_uniform_simplex(Rng& rng, int n) {
  if (n < 1) throw std::invalid_argument("sample_uniform_simplex: n >= 1");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> raw(static_cast<std::size_t>(n) * n);
  for (;;) {
    for (double& v : raw) v = expo(rng);
    // Degenerate draws (an exact zero from the generator) are probability
    // zero; resample instead of propagating them.
    bool ok = true;
    for (double v : raw)
      if (!(v > 0.0)) ok = false;
    if (!ok) continue;
    return SimplexMatrix::project(n, raw);
  }
}

Direction random_direction(Rng& rng, int n) {
  if (n < 2) throw std::invalid_argument("random_direction: n >= 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Direction dir;
  dir.n = n;
  dir.d.resize(static_cast<std::size_t>(n) * n);
  for (;;) {
    for (double& v : dir.d) v = gauss(rng);
    const double mean = kernels::sum(dir.d.data(), dir.d.size()) / dir.d.size();
    double norm2 = 0.0;
    for (double& v : dir.d) {
      v -= mean;
      norm2 += v * v;
    }
    if (norm2 > 0.0) {
      dir.norm = std::sqrt(norm2);
      // Make the centering sum exactly zero: fold the residual into one entry.
      dir.d[0] -= kernels::sum(dir.d.data(), dir.d.size());
      return dir;
    }
  }
}

std::pair<double, double> segment_in_simplex(const SimplexMatrix& x, const Direction& l,
                                             double margin) {
  if (x.n != l.n) throw std::invalid_argument("segment_in_simplex: dimension mismatch");
  const double floor_level = margin / (static_cast<double>(x.n) * x.n);
  double tau_minus = -std::numeric_limits<double>::infinity();
  double tau_plus = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.a.size(); ++k) {
    const double e = x.a[k], d = l.d[k];
    if (d > 0.0)
      tau_minus = std::max(tau_minus, (floor_level - e) / d);
    else if (d < 0.0)
      tau_plus = std::min(tau_plus, (floor_level - e) / d);
  }
  assert(tau_minus < 0.0 && tau_plus > 0.0);
  if (!(tau_minus < 0.0 && tau_plus > 0.0))
    throw numeric_error("segment_in_simplex: empty chord (point not interior)");
  return {tau_minus, tau_plus};
}

namespace {

SimplexMatrix point_on_line(const SimplexMatrix& x, const Direction& l, double tau) {
  std::vector<double> raw(x.a.size());
  for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = x.a[k] + tau * l.d[k];
  return SimplexMatrix::project(x.n, raw);
}

// Offset in [0, h] from the density proportional to exp(d * y / h).
double sample_exponential_segment(double h, double d, double u) {
  u = std::max(u, 1e-300);
  if (std::fabs(d) < 1e-12) return u * h;
  if (d > 30.0) return (h / d) * (d + std::log(u));  // log1p(u*expm1(d)) ~ d + ln u
  return (h / d) * std::log1p(u * std::expm1(d));
}

}  // namespace

SimplexMatrix sample_on_segment(const SimplexMatrix& x, const Direction& l, double s,
                                const ChainConfig& cfg, Rng& rng) {
  if (!(s > 0.0)) throw std::invalid_argument("sample_on_segment: s must be positive");
  if (cfg.knots < 4) throw std::invalid_argument("sample_on_segment: knots >= 4");
  const auto [tau_minus, tau_plus] = segment_in_simplex(x, l, cfg.positivity_margin);
  const int K = cfg.knots;
  const double h = (tau_plus - tau_minus) / (K - 1);

  // ln psi_s at the knots; finite for every interior point.
  std::vector<double> g(K);
  for (int k = 0; k < K; ++k) {
    g[k] = s * log_sigma(point_on_line(x, l, tau_minus + k * h));
    assert(std::isfinite(g[k]));
  }

  // Log-integral of each exponential sub-segment.
  std::vector<double> seg(K - 1);
  for (int k = 0; k + 1 < K; ++k)
    seg[k] = std::log(h) + g[k] + log_exp_ratio(g[k + 1] - g[k]);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double total = log_sum_exp(seg);
  double u = std::max(unif(rng), 1e-300);
  int pick = K - 2;
  double cum = 0.0;
  for (int k = 0; k + 1 < K; ++k) {
    cum += std::exp(seg[k] - total);
    if (u <= cum) {
      pick = k;
      break;
    }
  }

  const double d = g[pick + 1] - g[pick];
  const double off = sample_exponential_segment(h, d, unif(rng));
  const double tau_star = tau_minus + pick * h + off;
  SimplexMatrix proposal = point_on_line(x, l, tau_star);

  if (cfg.metropolis) {
    auto interp = [&](double tau) {
      double pos = (tau - tau_minus) / h;
      int k = std::min(std::max(static_cast<int>(pos), 0), K - 2);
      return g[k] + (g[k + 1] - g[k]) * (pos - k);
    };
    const double log_alpha = (s * log_sigma(proposal) - interp(tau_star)) -
                             (s * log_sigma(x) - interp(0.0));
    if (std::log(std::max(unif(rng), 1e-300)) >= log_alpha) return x;
  }
  return proposal;
}

SimplexMatrix hit_and_run_step(const SimplexMatrix& x, double s, const ChainConfig& cfg,
                               Rng& rng) {
  if (x.n == 1) return x;  // the simplex is a single point
  const Direction l = random_direction(rng, x.n);
  return sample_on_segment(x, l, s, cfg, rng);
}

SimplexMatrix hit_and_run_chain(SimplexMatrix x0, double s, const ChainConfig& cfg, Rng& rng) {
  if (cfg.burn_in_steps < 1) throw std::invalid_argument("hit_and_run_chain: burn_in_steps >= 1");
  for (int step = 0; step < cfg.burn_in_steps; ++step) x0 = hit_and_run_step(x0, s, cfg, rng);
  return x0;
}

}  // namespace magicsq
