#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weyllab/model_spaces.hpp"
#include "weyllab/numerics.hpp"
#include "weyllab/spectrum.hpp"

namespace weyllab {

/// int_X s^k / m(B_s(x)) dm(x). Interval quadrature is split at distance s
/// from the endpoints and graded toward them.
double criterion_integral(const ModelSpace& space, int k, double s, int quad_nodes = 20);

struct CriterionVerdict {
  std::vector<double> s;
  std::vector<double> values;
  Trend trend;
  double limit_estimate = 0.0;     // Richardson in s over the two finest points
  double pointwise_integral = 0.0; // int lim_s s^k / m(B_s(x)) dm = H^k / omega_k
  double dominating_bound = 0.0;   // sup over (x, s) of s^k theta(x) / m(B_s(x))
  bool finite = false;
  bool equal = false;
};

/// s_grid decreasing toward 0. equal <=> |limit - pointwise| <= tol (1 + pointwise).
CriterionVerdict criterion_verdict(const ModelSpace& space, int k, const std::vector<double>& s_grid, double tol,
                                   int quad_nodes = 20);

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
  Trend trend;
};

/// N(lambda) / lambda^exponent.
Curve counting_ratio(const Spectrum& spectrum, double exponent, const std::vector<double>& lambda_grid);
/// N(lambda) / lambda^{k/2}.
Curve weyl_ratio(const Spectrum& spectrum, int k, const std::vector<double>& lambda_grid);

struct TraceCurve {
  Curve curve;              // (t, (4 pi t)^{k/2} Z(t))
  double extrapolated = 0.0;  // Richardson in sqrt(t) over the two smallest t
};

TraceCurve trace_formula(const Spectrum& spectrum, int k, const std::vector<double>& t_grid,
                         const std::optional<PowerTail>& tail = std::nullopt);

/// omega_k H^k / (2 pi)^k.
double predicted_weyl_limit(const ModelSpace& space);

enum class SpectrumMethod { oracle, fd, prufer, suspension };

std::string method_name(SpectrumMethod method);
SpectrumMethod method_from_name(const std::string& name);
/// Oracle for intervals, circles and Gaussian spaces; suspension for towers.
SpectrumMethod default_method(const ModelSpace& space);

struct SpectrumRequest {
  SpectrumMethod method = SpectrumMethod::oracle;
  double lambda_max = 1e4;
  int fd_nodes = 2049;
  unsigned threads = 1;
};

/// Every eigenvalue <= lambda_max by the requested method.
Spectrum build_spectrum(const ModelSpace& space, const SpectrumRequest& request);

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 2;
  GridScale scale = GridScale::log;
  bool operator==(const GridSpec&) const = default;
  std::vector<double> values() const { return make_grid(start, stop, count, scale); }
};

struct WeylConfig {
  SpectrumRequest spectrum;
  std::optional<GridSpec> s_grid;
  std::optional<GridSpec> t_grid;
  std::optional<GridSpec> lambda_grid;
  double consistency_tol = 0.02;
  double criterion_tol = 1e-3;
};

struct SectionError {
  std::string code;
  std::string message;
};

struct WeylReport {
  ModelSpace space;
  std::string method;
  int k = 0;
  std::optional<double> hausdorff_mass;
  double predicted_limit = 0.0;
  double ratio_exponent = 0.0;
  std::string regime;  // "rcd-weyl" or "non-RCD*-Weyl regime"

  std::optional<Spectrum> spectrum;
  std::optional<SectionError> spectrum_error;

  std::optional<CriterionVerdict> criterion;
  std::optional<SectionError> criterion_error;

  std::optional<Curve> ratio;
  std::optional<Curve> compact_exponent_ratio;  // N / lambda^{k/2} when it differs from `ratio`
  std::optional<SectionError> ratio_error;

  std::optional<TraceCurve> trace;
  std::optional<PowerTail> trace_tail;
  std::optional<SectionError> trace_error;

  std::optional<double> ratio_limit;
  std::optional<double> karamata_limit;  // a / Gamma(k/2 + 1), a = trace limit / (4 pi)^{k/2}
  bool consistent = false;
  /// False when any computed verdict fails (criterion, three-way consistency).
  bool verdicts_hold() const noexcept;
};

WeylReport weyl_report(const ModelSpace& space, const WeylConfig& config);

nlohmann::ordered_json report_to_json(const WeylReport& report);
std::string curve_csv(const Curve& curve, const std::string& x_name, const std::string& y_name);

}  // namespace weyllab
