#include "weyllab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weyllab/error.hpp"
#include "weyllab/numerics.hpp"

namespace weyllab {

TridiagonalForm assemble_form(const WeightedInterval& space, int nodes) {
  validate(ModelSpace{space});
  if (nodes < 3) throw Error(ErrorCode::degenerate_grid, "assemble_form needs at least 3 grid nodes");
  const std::size_t m = static_cast<std::size_t>(nodes);
  const double h = kPi / static_cast<double>(m - 1);
  const double p = space.exponent;

  TridiagonalForm form;
  form.exponent = p;
  form.nodes.resize(m);
  for (std::size_t i = 0; i < m; ++i) form.nodes[i] = static_cast<double>(i) * h;
  form.nodes.back() = kPi;

  // Masses from the antiderivative at dual-cell boundaries.
  std::vector<double> cumulative(m + 1, 0.0);
  std::vector<double> cuts(m + 1);
  cuts[0] = 0.0;
  for (std::size_t i = 1; i < m; ++i) cuts[i] = (static_cast<double>(i) - 0.5) * h;
  cuts[m] = kPi;
  for (std::size_t i = 1; i <= m; ++i) {
    cumulative[i] = cumulative[i - 1] + interval_mass(p, cuts[i - 1], cuts[i]);
  }
  form.node_weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) form.node_weights[i] = cumulative[i + 1] - cumulative[i];

  std::vector<double> flux(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    flux[i] = std::pow(std::sin((static_cast<double>(i) + 0.5) * h), p) / h;
  }
  form.diag.assign(m, 0.0);
  form.offdiag.resize(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    form.diag[i] += flux[i];
    form.diag[i + 1] += flux[i];
  }
  for (std::size_t i = 0; i < m; ++i) form.diag[i] /= form.node_weights[i];
  for (std::size_t i = 0; i + 1 < m; ++i) {
    form.offdiag[i] = -flux[i] / std::sqrt(form.node_weights[i] * form.node_weights[i + 1]);
  }
  return form;
}

std::size_t sturm_count(const TridiagonalForm& form, double x) {
  const std::size_t n = form.size();
  const double tiny = std::numeric_limits<double>::min() * 1e4;
  std::size_t negatives = 0;
  double d = form.diag[0] - x;
  if (d == 0.0) d = -tiny;
  if (d < 0.0) ++negatives;
  for (std::size_t i = 1; i < n; ++i) {
    const double b = form.offdiag[i - 1];
    d = form.diag[i] - x - b * b / d;
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++negatives;
  }
  return negatives;
}

namespace {

std::pair<double, double> gershgorin(const TridiagonalForm& form) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = form.size();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::fabs(form.offdiag[i - 1]);
    if (i + 1 < n) radius += std::fabs(form.offdiag[i]);
    lo = std::min(lo, form.diag[i] - radius);
    hi = std::max(hi, form.diag[i] + radius);
  }
  return {lo, hi};
}

double bisect_eigenvalue(const TridiagonalForm& form, std::size_t k, double lo, double hi, double tol) {
  // Invariant: count(lo) <= k < count(hi).
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;  // bracket at machine resolution
    if (sturm_count(form, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw Error(ErrorCode::nonconvergence, "bisection exceeded 200 iterations");
}

// Solves (T - shift I) y = rhs in place by Gaussian elimination with partial
// pivoting on the tridiagonal band.
void shifted_solve(const TridiagonalForm& form, double shift, std::vector<double>& rhs,
                   std::vector<double>& work_d, std::vector<double>& work_du,
                   std::vector<double>& work_du2, std::vector<double>& work_dl) {
  const std::size_t n = form.size();
  work_d.resize(n);
  work_du.assign(n, 0.0);
  work_du2.assign(n, 0.0);
  work_dl.resize(n);
  for (std::size_t i = 0; i < n; ++i) work_d[i] = form.diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    work_du[i] = form.offdiag[i];
    work_dl[i] = form.offdiag[i];
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(work_d[i]));
  const double eps = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(work_d[i]) >= std::fabs(work_dl[i])) {
      if (work_d[i] == 0.0) work_d[i] = eps;
      const double f = work_dl[i] / work_d[i];
      work_d[i + 1] -= f * work_du[i];
      rhs[i + 1] -= f * rhs[i];
      work_dl[i] = 0.0;
    } else {
      // Swap rows i and i+1.
      const double f = work_d[i] / work_dl[i];
      work_d[i] = work_dl[i];
      const double tmp = work_d[i + 1];
      work_d[i + 1] = work_du[i] - f * tmp;
      if (i + 2 < n) {
        work_du2[i] = work_du[i + 1];
        work_du[i + 1] = -f * work_du2[i];
      }
      work_du[i] = tmp;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= f * rhs[i];
    }
  }
  if (work_d[n - 1] == 0.0) work_d[n - 1] = eps;
  rhs[n - 1] /= work_d[n - 1];
  if (n >= 2) rhs[n - 2] = (rhs[n - 2] - work_du[n - 2] * rhs[n - 1]) / work_d[n - 2];
  for (std::size_t ii = n - 2; ii-- > 0;) {
    rhs[ii] = (rhs[ii] - work_du[ii] * rhs[ii + 1] - work_du2[ii] * rhs[ii + 2]) / work_d[ii];
  }
}

void normalize(std::vector<double>& v) {
  CompensatedSum s;
  for (double x : v) s += x * x;
  const double norm = std::sqrt(s.value());
  for (double& x : v) x /= norm;
}

}  // namespace

std::vector<double> tridiag_eigenvalue_list(const TridiagonalForm& form, std::size_t count, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::domain, "tolerance must be positive");
  if (count > form.size()) throw Error(ErrorCode::domain, "count exceeds matrix dimension");
  auto [lo, hi] = gershgorin(form);
  lo -= tol;
  hi += tol;
  std::vector<double> values(count);
  double floor = lo;
  for (std::size_t k = 0; k < count; ++k) {
    values[k] = bisect_eigenvalue(form, k, floor, hi, tol);
    floor = std::max(lo, values[k] - tol);
  }
  return values;
}

Spectrum tridiag_eigenvalues(const TridiagonalForm& form, std::size_t count, double tol) {
  const auto values = tridiag_eigenvalue_list(form, count, tol);
  // The discrete operator is positive semidefinite; clamp roundoff below zero.
  std::vector<double> clamped(values);
  for (double& v : clamped) v = std::max(v, 0.0);
  return Spectrum::from_values(clamped, clamped.empty() ? 0.0 : clamped.back());
}

EigenPairs tridiag_eigenpairs(const TridiagonalForm& form, std::size_t count, double tol, unsigned threads) {
  EigenPairs pairs;
  pairs.values = tridiag_eigenvalue_list(form, count, tol);
  const std::size_t n = form.size();
  pairs.size = n;
  pairs.functions.assign(count * n, 0.0);
  const auto [glo, ghi] = gershgorin(form);
  const double nudge = 1e-13 * std::max(std::fabs(glo), std::fabs(ghi));

  parallel_for(count, threads, [&](std::size_t k) {
    std::vector<double> v(n);
    // Deterministic start vector with no special symmetry.
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3 * static_cast<double>(k));
    }
    normalize(v);
    std::vector<double> d, du, du2, dl;
    const double shift = pairs.values[k] + nudge;
    for (int sweep = 0; sweep < 3; ++sweep) {
      shifted_solve(form, shift, v, d, du, du2, dl);
      normalize(v);
    }
    // Sign convention: largest-magnitude component positive (first one on ties).
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::fabs(v[i]) > std::fabs(v[arg]) * (1.0 + 1e-9)) arg = i;
    }
    const double sign = v[arg] < 0.0 ? -1.0 : 1.0;
    double* out = pairs.functions.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) out[i] = sign * v[i] / std::sqrt(form.node_weights[i]);
  });
  return pairs;
}

}  // namespace weyllab
