#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace weyllab {

inline constexpr double kPi = 3.14159265358979323846;

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Volume of the unit ball in R^k.
double unit_ball_volume(int k);

/// Adaptive Simpson quadrature. Stops refining a panel once the Richardson
/// error estimate is below its share of `abs_tol` or `max_depth` is reached.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-12, int max_depth = 40);

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes by Newton iteration on P_n.
QuadratureRule gauss_legendre(int n);

/// Integrates f over [a, b] with `rule` on `panels` equal panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        const QuadratureRule& rule, int panels = 1);

/// Integrates f over [a, b] with panels graded geometrically toward the
/// endpoints selected by `grade_left`/`grade_right`. Suited to integrands with
/// algebraic endpoint behavior such as x^p.
double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        const QuadratureRule& rule, bool grade_left, bool grade_right,
                        int layers = 24, double ratio = 0.2);

enum class GridScale { linear, log };

/// `count` points from `start` to `stop` inclusive.
std::vector<double> make_grid(double start, double stop, int count, GridScale scale);

/// Power-law continuation of a counting function beyond its last resolved
/// value Lambda: N(lambda) = N(Lambda) + coef * (lambda^exponent - Lambda^exponent).
struct PowerTail {
  double coef = 0.0;
  double exponent = 0.0;

  bool operator==(const PowerTail&) const = default;

  /// Integral of exp(-lambda t) dN over (anchor, infinity).
  double laplace_beyond(double anchor, double t) const;
};

/// Summary of a finite sweep approaching a limit.
struct Trend {
  double last = 0.0;       // value at the finest grid point
  double log_slope = 0.0;  // d log|value| / d log(x) over the last three points
  double tail_min = 0.0;   // inf over the final half of the sweep
  double tail_max = 0.0;   // sup over the final half of the sweep
};

/// `x` is the sweep abscissa (s, t or lambda), `y` the values, both in sweep order.
Trend summarize_sweep(std::span<const double> x, std::span<const double> y);

/// Two-level Richardson extrapolation of y(h) = y0 + c h^order + ... to h = 0.
double richardson(double h_coarse, double y_coarse, double h_fine, double y_fine,
                  double order = 1.0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; callers write results into index-addressed slots so
/// the outcome does not depend on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Resolves 0 to the hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace weyllab
