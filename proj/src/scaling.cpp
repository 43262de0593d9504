#include "magicsq/scaling.hpp"

#include <cmath>
#include <string>

#include "magicsq/kernels.hpp"

namespace magicsq {

namespace {

// Max deviation of row and column sums from 1 on the current iterate.
double balance_residual(int n, const std::vector<double>& y) {
  std::vector<double> col(n, 0.0);
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = y.data() + static_cast<std::size_t>(i) * n;
    res = std::max(res, std::fabs(kernels::sum(row, n) - 1.0));
    kernels::add(col.data(), row, n);
  }
  res = std::max(res, kernels::max_abs_dev(col.data(), n, 1.0));
  return res;
}

}  // namespace

ScalingResult sinkhorn_scale(const SimplexMatrix& x, double tol, int max_iter) {
  x.check();
  if (!(tol > 0.0) || max_iter < 1)
    throw std::invalid_argument("sinkhorn_scale: tol must be > 0, max_iter >= 1");
  const int n = x.n;

  ScalingResult r;
  r.n = n;
  r.y = x.a;
  r.log_row.assign(n, 0.0);
  r.log_col.assign(n, 0.0);

  std::vector<double> col(n), inv_col(n);

  auto full_pass = [&]() {
    // Row pass: divide each row by its sum.
    for (int i = 0; i < n; ++i) {
      double* row = r.y.data() + static_cast<std::size_t>(i) * n;
      const double s = kernels::sum(row, n);
      kernels::scale(row, n, 1.0 / s);
      r.log_row[i] += std::log(s);
    }
    // Column pass.
    col.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
      kernels::add(col.data(), r.y.data() + static_cast<std::size_t>(i) * n, n);
    for (int j = 0; j < n; ++j) {
      inv_col[j] = 1.0 / col[j];
      r.log_col[j] += std::log(col[j]);
    }
    for (int i = 0; i < n; ++i)
      kernels::mul(r.y.data() + static_cast<std::size_t>(i) * n, inv_col.data(), n);
    r.residual = balance_residual(n, r.y);
  };

  // Dual objective of the balancing problem, with y_ij = x_ij e^{-u_i - v_j}
  // for u = log_row, v = log_col:
  //   G(u, v) = sum_ij y_ij + sum_i u_i + sum_j v_j,
  // smooth and convex; its stationary points are exactly the balanced
  // scalings. Alternating normalization minimizes G one block at a time;
  // matrices with near-boundary entries make that crawl, so the slow cases
  // are finished with damped Newton steps on G instead.
  auto rebuild_y = [&]() {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double e = -r.log_row[i] - r.log_col[j] + std::log(x(i, j));
        if (e > 700.0) return false;
        r.y[static_cast<std::size_t>(i) * n + j] = std::exp(e);
      }
    return true;
  };
  auto dual_value = [&]() {
    double g = kernels::sum(r.y.data(), r.y.size());
    for (int i = 0; i < n; ++i) g += r.log_row[i] + r.log_col[i];
    return g;
  };

  auto newton_step = [&]() {
    const int m = 2 * n;
    // Gradient: 1 - (row sum) over u, 1 - (col sum) over v.
    std::vector<double> grad(m), rs(n, 0.0), cs(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double* row = r.y.data() + static_cast<std::size_t>(i) * n;
      rs[i] = kernels::sum(row, n);
      kernels::add(cs.data(), row, n);
    }
    for (int i = 0; i < n; ++i) grad[i] = 1.0 - rs[i];
    for (int j = 0; j < n; ++j) grad[n + j] = 1.0 - cs[j];

    // Hessian [[diag(rs), Y], [Y^T, diag(cs)]] plus a tiny ridge; the
    // all-ones/minus-ones null direction is never excited by the gradient.
    std::vector<double> h(static_cast<std::size_t>(m) * m, 0.0);
    const double ridge = 1e-12;
    for (int i = 0; i < n; ++i) {
      h[static_cast<std::size_t>(i) * m + i] = rs[i] + ridge;
      for (int j = 0; j < n; ++j) {
        const double v = r.y[static_cast<std::size_t>(i) * n + j];
        h[static_cast<std::size_t>(i) * m + (n + j)] = v;
        h[static_cast<std::size_t>(n + j) * m + i] = v;
      }
    }
    for (int j = 0; j < n; ++j)
      h[static_cast<std::size_t>(n + j) * m + (n + j)] = cs[j] + ridge;

    // Solve H d = grad by Gaussian elimination with partial pivoting.
    std::vector<double> d = grad;
    for (int k = 0; k < m; ++k) {
      int piv = k;
      for (int i = k + 1; i < m; ++i)
        if (std::fabs(h[static_cast<std::size_t>(i) * m + k]) >
            std::fabs(h[static_cast<std::size_t>(piv) * m + k]))
          piv = i;
      if (piv != k) {
        for (int j = k; j < m; ++j)
          std::swap(h[static_cast<std::size_t>(k) * m + j],
                    h[static_cast<std::size_t>(piv) * m + j]);
        std::swap(d[k], d[piv]);
      }
      const double pivot = h[static_cast<std::size_t>(k) * m + k];
      if (std::fabs(pivot) < 1e-300) return false;
      for (int i = k + 1; i < m; ++i) {
        const double f = h[static_cast<std::size_t>(i) * m + k] / pivot;
        if (f == 0.0) continue;
        for (int j = k; j < m; ++j)
          h[static_cast<std::size_t>(i) * m + j] -= f * h[static_cast<std::size_t>(k) * m + j];
        d[i] -= f * d[k];
      }
    }
    for (int k = m - 1; k >= 0; --k) {
      for (int j = k + 1; j < m; ++j) d[k] -= h[static_cast<std::size_t>(k) * m + j] * d[j];
      d[k] /= h[static_cast<std::size_t>(k) * m + k];
    }

    double descent = 0.0;
    for (int k = 0; k < m; ++k) descent += grad[k] * d[k];
    if (!(descent > 0.0)) return false;

    // Armijo backtracking on G along u -= alpha d_u, v -= alpha d_v.
    const std::vector<double> u0 = r.log_row, v0 = r.log_col;
    const double g0 = dual_value();
    for (double alpha = 1.0; alpha >= 1e-12; alpha *= 0.5) {
      for (int i = 0; i < n; ++i) r.log_row[i] = u0[i] - alpha * d[i];
      for (int j = 0; j < n; ++j) r.log_col[j] = v0[j] - alpha * d[n + j];
      if (rebuild_y() && dual_value() <= g0 - 1e-4 * alpha * descent) {
        r.residual = balance_residual(n, r.y);
        return true;
      }
    }
    r.log_row = u0;
    r.log_col = v0;
    rebuild_y();
    r.residual = balance_residual(n, r.y);
    return false;
  };

  for (int iter = 1; iter <= max_iter; ++iter) {
    full_pass();
    r.iterations = iter;
    if (r.residual > tol && iter > 4) newton_step();
    if (r.residual <= tol) {
      double ls = 0.0;
      for (int i = 0; i < n; ++i) ls += r.log_row[i] + r.log_col[i];
      r.log_sigma = ls;
      return r;
    }
  }
  throw numeric_error("sinkhorn_scale: residual " + std::to_string(r.residual) +
                      " after " + std::to_string(max_iter) + " iterations (tol " +
                      std::to_string(tol) + ")");
}

double log_sigma(const SimplexMatrix& x, double tol, int max_iter) {
  return sinkhorn_scale(x, tol, max_iter).log_sigma;
}

double sigma_via_minimization(const SimplexMatrix& x, double tol) {
  x.check();
  const int n = x.n;
  if (n == 1) return 0.0;

  // Minimize F(u, v) = sum_ij x_ij exp(u_i + v_j) over sum u = sum v = 0.
  std::vector<double> u(n, 0.0), v(n, 0.0), gu(n), gv(n), pu(n, 0.0), pv(n, 0.0);

  auto objective = [&](const std::vector<double>& uu, const std::vector<double>& vv) {
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
      const double eu = std::exp(uu[i]);
      for (int j = 0; j < n; ++j) f += x(i, j) * eu * std::exp(vv[j]);
    }
    return f;
  };
  auto gradient = [&](double& gnorm) {
    gu.assign(n, 0.0);
    gv.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double eu = std::exp(u[i]);
      for (int j = 0; j < n; ++j) {
        const double term = x(i, j) * eu * std::exp(v[j]);
        gu[i] += term;
        gv[j] += term;
      }
    }
    // Project onto the zero-sum subspace.
    double mu = kernels::sum(gu.data(), n) / n, mv = kernels::sum(gv.data(), n) / n;
    gnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      gu[i] -= mu;
      gv[i] -= mv;
      gnorm += gu[i] * gu[i] + gv[i] * gv[i];
    }
    gnorm = std::sqrt(gnorm);
  };

  double f = objective(u, v);
  double step = 1.0;
  int stalled = 0;
  std::vector<double> gu_prev, gv_prev, u_prev, v_prev;
  const int max_iter = 200000;
  for (int iter = 0; iter < max_iter; ++iter) {
    double gnorm;
    gradient(gnorm);
    // Converged, or the objective sits at the double precision floor of its
    // minimum (the problem is convex, so stagnation means we are there).
    if (gnorm <= tol || stalled >= 30) {
      const double fmin = objective(u, v);
      return n * std::log(fmin) - n * std::log(static_cast<double>(n));
    }
    if (iter > 0) {
      // Barzilai-Borwein step length from the last displacement.
      double sy = 0.0, yy = 0.0;
      for (int i = 0; i < n; ++i) {
        const double su = u[i] - u_prev[i], sv = v[i] - v_prev[i];
        const double yu = gu[i] - gu_prev[i], yv = gv[i] - gv_prev[i];
        sy += su * yu + sv * yv;
        yy += yu * yu + yv * yv;
      }
      if (sy > 0.0 && yy > 0.0) step = sy / yy;
    }
    u_prev = u;
    v_prev = v;
    gu_prev = gu;
    gv_prev = gv;
    // Backtracking safeguard.
    for (int bt = 0; bt < 60; ++bt) {
      for (int i = 0; i < n; ++i) {
        u[i] = u_prev[i] - step * gu[i];
        v[i] = v_prev[i] - step * gv[i];
      }
      const double fn = objective(u, v);
      if (fn <= f) {
        stalled = (f - fn <= 1e-15 * f) ? stalled + 1 : 0;
        f = fn;
        break;
      }
      step *= 0.5;
      if (bt == 59) throw numeric_error("sigma_via_minimization: line search failed");
    }
  }
  throw numeric_error("sigma_via_minimization: gradient tolerance not reached");
}

double scaling_entry_bound(int n, const std::vector<double>& a, int k, int l) {
  if (n < 3) throw std::invalid_argument("scaling_entry_bound: requires n >= 3");
  if (a.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("scaling_entry_bound: bad dimensions");
  if (k < 0 || k >= n || l < 0 || l >= n)
    throw std::invalid_argument("scaling_entry_bound: index out of range");
  for (double v : a)
    if (!(v > 0.0)) throw std::invalid_argument("scaling_entry_bound: entries must be positive");

  auto at = [&](int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; };
  double cross_row = 0.0, cross_col = 0.0;
  for (int j = 0; j < n; ++j)
    if (j != l) cross_row += std::log(at(k, j));
  for (int i = 0; i < n; ++i)
    if (i != k) cross_col += std::log(at(i, l));
  const double total = kernels::sum(a.data(), a.size());
  const double nm2 = n - 2.0;
  return std::log(at(k, l)) - cross_row / nm2 - cross_col / nm2 +
         (n / nm2) * std::log(total / n) - ((2.0 * n - 2.0) / nm2) * std::log(n - 1.0);
}

}  // namespace magicsq
