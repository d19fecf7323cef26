#include "weyllab/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "weyllab/error.hpp"

namespace weyllab {

double unit_ball_volume(int k) {
  if (k < 0) throw Error(ErrorCode::domain, "unit ball dimension must be nonnegative");
  return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
  const double right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
  const double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) {
    return left + right + diff / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
  return simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::domain, "Gauss-Legendre order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n == 1) rule.weights[0] = 2.0;
  return rule;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        const QuadratureRule& rule, int panels) {
  CompensatedSum sum;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += half * rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
  }
  return sum.value();
}

double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        const QuadratureRule& rule, bool grade_left, bool grade_right,
                        int layers, double ratio) {
  // Breakpoints: geometric layers collapsing onto the graded endpoints.
  std::vector<double> breaks;
  const double len = b - a;
  double lo = a;
  double hi = b;
  if (grade_left && grade_right) {
    lo = a + 0.25 * len;
    hi = b - 0.25 * len;
  } else if (grade_left) {
    lo = a + 0.5 * len;
  } else if (grade_right) {
    hi = b - 0.5 * len;
  }
  if (grade_left) {
    breaks.push_back(a);
    std::vector<double> left;
    double d = lo - a;
    for (int l = 0; l < layers; ++l) {
      left.push_back(a + d);
      d *= ratio;
    }
    std::reverse(left.begin(), left.end());
    breaks.insert(breaks.end(), left.begin(), left.end());
  } else {
    breaks.push_back(a);
  }
  if (grade_right) {
    if (hi > breaks.back()) breaks.push_back(hi);
    double d = b - hi;
    for (int l = 1; l < layers; ++l) {
      d *= ratio;
      breaks.push_back(b - d);
    }
    breaks.push_back(b);
  } else {
    breaks.push_back(b);
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i]) {
      sum += integrate_panels(f, breaks[i], breaks[i + 1], rule, 1);
    }
  }
  return sum.value();
}

std::vector<double> make_grid(double start, double stop, int count, GridScale scale) {
  if (count < 2) throw Error(ErrorCode::degenerate_grid, "grid needs at least two points");
  if (scale == GridScale::log && (start <= 0.0 || stop <= 0.0)) {
    throw Error(ErrorCode::domain, "log grid endpoints must be positive");
  }
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    const double u = static_cast<double>(i) / (count - 1);
    if (scale == GridScale::linear) {
      grid[i] = start + u * (stop - start);
    } else {
      grid[i] = std::exp(std::log(start) + u * (std::log(stop) - std::log(start)));
    }
  }
  grid.front() = start;
  grid.back() = stop;
  return grid;
}

double PowerTail::laplace_beyond(double anchor, double t) const {
  if (coef == 0.0 || exponent == 0.0) return 0.0;
  // coef * exponent * int_anchor^inf lambda^(exponent-1) e^{-lambda t} dlambda
  const double x = anchor * t;
  return coef * exponent * std::pow(t, -exponent) * boost::math::tgamma(exponent, x);
}

Trend summarize_sweep(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || y.empty()) {
    throw Error(ErrorCode::domain, "sweep abscissae and values must be nonempty and aligned");
  }
  Trend trend;
  const std::size_t n = y.size();
  trend.last = y.back();
  const std::size_t half = n / 2;
  trend.tail_min = *std::min_element(y.begin() + half, y.end());
  trend.tail_max = *std::max_element(y.begin() + half, y.end());
  if (n >= 3) {
    // Least-squares slope through the last three points in log-log scale.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (std::size_t i = n - 3; i < n; ++i) {
      if (x[i] <= 0.0 || y[i] == 0.0) continue;
      const double lx = std::log(x[i]);
      const double ly = std::log(std::fabs(y[i]));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++used;
    }
    const double den = used * sxx - sx * sx;
    if (used >= 2 && den != 0.0) trend.log_slope = (used * sxy - sx * sy) / den;
  }
  return trend;
}

double richardson(double h_coarse, double y_coarse, double h_fine, double y_fine, double order) {
  const double rc = std::pow(h_coarse, order);
  const double rf = std::pow(h_fine, order);
  if (rc == rf) return y_fine;
  return (y_fine * rc - y_coarse * rf) / (rc - rf);
}

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace weyllab
