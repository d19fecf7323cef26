#include "weyllab/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail/overloaded.hpp"
#include "weyllab/error.hpp"
#include "weyllab/heat.hpp"
#include "weyllab/io.hpp"
#include "weyllab/sturm_liouville.hpp"
#include "weyllab/tridiagonal.hpp"

namespace weyllab {

using detail::Overloaded;

namespace {

void check_criterion_space(const ModelSpace& space, int k) {
  validate(space);
  if (std::holds_alternative<Gaussian>(space)) {
    throw Error(ErrorCode::noncompact, "the criterion is stated for compact spaces");
  }
  if (std::holds_alternative<SuspensionTower>(space)) {
    throw Error(ErrorCode::unsupported_variant, "tower ball volumes are not available");
  }
  if (k != regular_dimension(space)) {
    throw Error(ErrorCode::domain, "k must equal the regular dimension " + std::to_string(regular_dimension(space)));
  }
}

// Lebesgue density of the measure in the interval coordinate.
double interval_weight(double p, double x) { return p == 0.0 ? 1.0 : std::pow(std::sin(x), p); }

}  // namespace

double criterion_integral(const ModelSpace& space, int k, double s, int quad_nodes) {
  check_criterion_space(space, k);
  if (!(s > 0.0)) throw Error(ErrorCode::domain, "criterion radius s must be positive");
  if (quad_nodes < 2) throw Error(ErrorCode::degenerate_grid, "quadrature needs at least 2 nodes");

  if (const auto* circle = std::get_if<Circle>(&space)) {
    return circle->length * s / std::min(2.0 * s, circle->length);
  }
  const double p = std::get<WeightedInterval>(space).exponent;
  if (s >= kPi) return s;  // every ball is the whole space

  const QuadratureRule rule = gauss_legendre(quad_nodes);
  auto integrand = [&](double x) {
    const double lo = std::max(0.0, x - s);
    const double hi = std::min(kPi, x + s);
    return s * interval_weight(p, x) / interval_mass(p, lo, hi);
  };
  std::vector<double> cuts{0.0, kPi};
  if (s < kPi) {
    cuts.push_back(s);
    cuts.push_back(kPi - s);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  CompensatedSum total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_graded(integrand, cuts[i], cuts[i + 1], rule, true, true);
  }
  return total.value();
}

CriterionVerdict criterion_verdict(const ModelSpace& space, int k, const std::vector<double>& s_grid, double tol,
                                   int quad_nodes) {
  check_criterion_space(space, k);
  if (s_grid.size() < 2) throw Error(ErrorCode::degenerate_grid, "criterion sweep needs at least two radii");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0)) throw Error(ErrorCode::domain, "criterion radii must be positive");
    if (i > 0 && !(s_grid[i] < s_grid[i - 1])) throw Error(ErrorCode::domain, "s grid must decrease");
  }
  CriterionVerdict v;
  v.s = s_grid;
  for (double s : s_grid) v.values.push_back(criterion_integral(space, k, s, quad_nodes));
  v.trend = summarize_sweep(v.s, v.values);
  const std::size_t n = v.values.size();
  v.limit_estimate = richardson(v.s[n - 2], v.values[n - 2], v.s[n - 1], v.values[n - 1], 1.0);

  const double omega = unit_ball_volume(k);
  const QuadratureRule rule = gauss_legendre(quad_nodes);
  std::vector<double> probes;
  std::visit(Overloaded{
                 [&](const WeightedInterval& w) {
                   // lim s^k / m(B_s(x)) = 1 / (omega_k theta(x)), integrated against dm.
                   auto limit = [&](double x) {
                     // Graded nodes next to pi can round onto the endpoint.
                     x = std::min(x, std::nextafter(kPi, 0.0));
                     return interval_weight(w.exponent, x) / (omega * density_at(space, Point{x}).theta);
                   };
                   v.pointwise_integral = integrate_graded(limit, 0.0, kPi, rule, true, true);
                   for (int i = 1; i < 2000; ++i) probes.push_back(kPi * i / 2000.0);
                   for (int j = 1; j <= 12; ++j) {
                     probes.push_back(std::pow(10.0, -j));
                     probes.push_back(kPi - std::pow(10.0, -j));
                   }
                 },
                 [&](const Circle& c) {
                   v.pointwise_integral = c.length / (omega * density_at(space, Point{0.0}).theta);
                   for (int i = 0; i < 16; ++i) probes.push_back(c.length * i / 16.0);
                 },
                 [](const auto&) {},
             },
             space);
  for (double s : s_grid) {
    for (double x : probes) {
      const double theta = density_at(space, Point{x}).theta;
      v.dominating_bound = std::max(v.dominating_bound, std::pow(s, k) * theta / ball_volume(space, Point{x}, s));
    }
  }
  v.finite = std::isfinite(v.limit_estimate) && std::fabs(v.trend.log_slope) < 0.05;
  v.equal = std::fabs(v.limit_estimate - v.pointwise_integral) <= tol * (1.0 + v.pointwise_integral);
  return v;
}

Curve counting_ratio(const Spectrum& spectrum, double exponent, const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) throw Error(ErrorCode::domain, "empty lambda grid");
  Curve c;
  c.x = lambda_grid;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::domain, "lambda must be positive");
    c.y.push_back(static_cast<double>(spectrum.counting(lambda)) / std::pow(lambda, exponent));
  }
  c.trend = summarize_sweep(c.x, c.y);
  return c;
}

Curve weyl_ratio(const Spectrum& spectrum, int k, const std::vector<double>& lambda_grid) {
  return counting_ratio(spectrum, 0.5 * k, lambda_grid);
}

TraceCurve trace_formula(const Spectrum& spectrum, int k, const std::vector<double>& t_grid,
                         const std::optional<PowerTail>& tail) {
  if (t_grid.empty()) throw Error(ErrorCode::domain, "empty t grid");
  TraceCurve out;
  out.curve.x = t_grid;
  for (double t : t_grid) out.curve.y.push_back(std::pow(4.0 * kPi * t, 0.5 * k) * heat_trace(spectrum, t, tail));
  out.curve.trend = summarize_sweep(out.curve.x, out.curve.y);
  const std::size_t n = t_grid.size();
  out.extrapolated = n >= 2 ? richardson(std::sqrt(t_grid[n - 2]), out.curve.y[n - 2], std::sqrt(t_grid[n - 1]),
                                         out.curve.y[n - 1], 1.0)
                            : out.curve.y.back();
  return out;
}

double predicted_weyl_limit(const ModelSpace& space) {
  const int k = regular_dimension(space);
  return unit_ball_volume(k) * hausdorff_mass(space) / std::pow(2.0 * kPi, k);
}

std::string method_name(SpectrumMethod method) {
  switch (method) {
    case SpectrumMethod::oracle: return "oracle";
    case SpectrumMethod::fd: return "fd";
    case SpectrumMethod::prufer: return "prufer";
    case SpectrumMethod::suspension: return "suspension";
  }
  return "oracle";
}

SpectrumMethod method_from_name(const std::string& name) {
  if (name == "oracle") return SpectrumMethod::oracle;
  if (name == "fd") return SpectrumMethod::fd;
  if (name == "prufer") return SpectrumMethod::prufer;
  if (name == "suspension") return SpectrumMethod::suspension;
  throw Error(ErrorCode::config, "unknown method '" + name + "' (oracle|fd|prufer|suspension)");
}

SpectrumMethod default_method(const ModelSpace& space) {
  return std::holds_alternative<SuspensionTower>(space) ? SpectrumMethod::suspension : SpectrumMethod::oracle;
}

Spectrum build_spectrum(const ModelSpace& space, const SpectrumRequest& request) {
  validate(space);
  const double lambda_max = request.lambda_max;
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw Error(ErrorCode::domain, "lambda_max must be positive");
  switch (request.method) {
    case SpectrumMethod::oracle:
      return oracle_spectrum_up_to(space, lambda_max);
    case SpectrumMethod::fd: {
      const auto* w = std::get_if<WeightedInterval>(&space);
      if (!w) throw Error(ErrorCode::unsupported_variant, "finite differences are implemented for intervals only");
      const TridiagonalForm form = assemble_form(*w, request.fd_nodes);
      const std::size_t count = std::max<std::size_t>(1, sturm_count(form, lambda_max * (1.0 + 1e-12)));
      const auto values = tridiag_eigenvalue_list(form, count, 1e-10 * (1.0 + lambda_max));
      std::vector<double> kept;
      for (double v : values) {
        if (v <= lambda_max) kept.push_back(std::max(v, 0.0));
      }
      return Spectrum::from_values(kept, lambda_max);
    }
    case SpectrumMethod::prufer: {
      const auto* w = std::get_if<WeightedInterval>(&space);
      if (!w) throw Error(ErrorCode::unsupported_variant, "Prufer shooting is implemented for intervals only");
      const RadialProblem problem{w->exponent, 0.0};
      const auto count = static_cast<std::size_t>(radial_count(problem, lambda_max));
      std::vector<double> values(count);
      parallel_for(count, request.threads, [&](std::size_t i) {
        const double bound = 2.0 * (static_cast<double>(i) + w->exponent + 2.0);
        values[i] = radial_eigenvalue(problem, static_cast<int>(i), 0.0, bound * bound, 1e-10 * (1.0 + lambda_max));
      });
      std::vector<double> kept;
      for (double v : values) {
        if (v <= lambda_max) kept.push_back(v);
      }
      return Spectrum::from_values(kept, lambda_max);
    }
    case SpectrumMethod::suspension: {
      const auto* tower = std::get_if<SuspensionTower>(&space);
      if (!tower) throw Error(ErrorCode::unsupported_variant, "the suspension method needs a tower");
      SuspensionOptions options;
      options.threads = request.threads;
      return tower_spectrum(*tower, lambda_max, options);
    }
  }
  throw Error(ErrorCode::config, "unknown method");
}

bool WeylReport::verdicts_hold() const noexcept {
  if (criterion && !(criterion->finite && criterion->equal)) return false;
  return consistent;
}

namespace {

SectionError section_error(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return {std::string(to_string(err->code())), err->what()};
  return {"internal", e.what()};
}

std::vector<double> grid_or(const std::optional<GridSpec>& spec, double start, double stop, int count) {
  return spec ? spec->values() : make_grid(start, stop, count, GridScale::log);
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }

}  // namespace

WeylReport weyl_report(const ModelSpace& space, const WeylConfig& config) {
  validate(space);
  WeylReport r;
  r.space = space;
  r.method = method_name(config.spectrum.method);
  r.k = regular_dimension(space);
  const bool compact = is_compact(space);
  if (compact) {
    r.hausdorff_mass = hausdorff_mass(space);
    r.predicted_limit = predicted_weyl_limit(space);
    r.ratio_exponent = 0.5 * r.k;
    r.regime = "rcd-weyl";
  } else {
    const int n = std::get<Gaussian>(space).dim;
    r.ratio_exponent = n;
    r.predicted_limit = 1.0 / std::tgamma(n + 1.0);
    r.regime = "non-RCD*-Weyl regime";
  }
  const double lambda_max = config.spectrum.lambda_max;
  const bool use_tail = config.spectrum.method == SpectrumMethod::suspension;

  parallel_for(2, config.spectrum.threads, [&](std::size_t section) {
    if (section == 0) {
      try {
        const auto s = grid_or(config.s_grid, 1e-1, 1e-3, 5);
        r.criterion = criterion_verdict(space, r.k, s, config.criterion_tol);
      } catch (const std::exception& e) {
        r.criterion_error = section_error(e);
      }
      return;
    }
    try {
      r.spectrum = build_spectrum(space, config.spectrum);
    } catch (const std::exception& e) {
      r.spectrum_error = section_error(e);
      r.ratio_error = r.trace_error = SectionError{"unavailable", "no spectrum"};
      return;
    }
    try {
      const auto lambda = grid_or(config.lambda_grid, lambda_max / 100.0, lambda_max, 9);
      r.ratio = counting_ratio(*r.spectrum, r.ratio_exponent, lambda);
      if (!compact) r.compact_exponent_ratio = counting_ratio(*r.spectrum, 0.5 * r.k, lambda);
      r.ratio_limit = r.ratio->trend.last;
    } catch (const std::exception& e) {
      r.ratio_error = section_error(e);
    }
    if (!compact) {
      r.trace_error = SectionError{"noncompact", "trace formula is stated for compact spaces"};
      return;
    }
    try {
      const double t_min = use_tail ? 1.0 / lambda_max : 50.0 / lambda_max;
      const auto t = grid_or(config.t_grid, 100.0 * t_min, t_min, 9);
      if (use_tail) r.trace_tail = fit_power_tail(*r.spectrum, 0.5 * r.k);
      r.trace = trace_formula(*r.spectrum, r.k, t, r.trace_tail);
      const double a = r.trace->extrapolated / std::pow(4.0 * kPi, 0.5 * r.k);
      r.karamata_limit = a / std::tgamma(0.5 * r.k + 1.0);
    } catch (const std::exception& e) {
      r.trace_error = section_error(e);
    }
  });

  const double tol = config.consistency_tol;
  r.consistent = r.ratio_limit.has_value() && close(*r.ratio_limit, r.predicted_limit, tol);
  if (compact) r.consistent = r.consistent && r.karamata_limit && close(*r.karamata_limit, r.predicted_limit, tol);
  return r;
}

namespace {

nlohmann::ordered_json error_json(const SectionError& e) {
  nlohmann::ordered_json j;
  j["error"]["code"] = e.code;
  j["error"]["message"] = e.message;
  return j;
}

nlohmann::ordered_json trend_json(const Trend& t) {
  nlohmann::ordered_json j;
  j["last"] = t.last;
  j["log_slope"] = t.log_slope;
  j["tail_min"] = t.tail_min;
  j["tail_max"] = t.tail_max;
  return j;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json report_to_json(const WeylReport& r) {
  nlohmann::ordered_json j;
  j["space"] = space_to_json(r.space);
  j["method"] = r.method;
  j["k"] = r.k;
  j["hausdorff_mass"] = optional_number(r.hausdorff_mass);
  j["predicted_weyl_limit"] = r.predicted_limit;
  j["ratio_exponent"] = r.ratio_exponent;
  j["regime"] = r.regime;

  if (r.spectrum) {
    nlohmann::ordered_json s;
    s["levels"] = r.spectrum->entries().size();
    s["total_multiplicity"] = r.spectrum->total_multiplicity();
    s["complete_up_to"] = r.spectrum->complete_up_to();
    j["spectrum"] = s;
  } else if (r.spectrum_error) {
    j["spectrum"] = error_json(*r.spectrum_error);
  }

  if (r.criterion) {
    const auto& c = *r.criterion;
    nlohmann::ordered_json cj;
    cj["limit_estimate"] = c.limit_estimate;
    cj["pointwise_integral"] = c.pointwise_integral;
    cj["dominating_bound"] = c.dominating_bound;
    cj["finite"] = c.finite;
    cj["equal"] = c.equal;
    cj["trend"] = trend_json(c.trend);
    j["criterion"] = cj;
  } else if (r.criterion_error) {
    j["criterion"] = error_json(*r.criterion_error);
  }

  if (r.ratio) {
    nlohmann::ordered_json rj;
    rj["exponent"] = r.ratio_exponent;
    rj["trend"] = trend_json(r.ratio->trend);
    if (r.compact_exponent_ratio) {
      rj["compact_exponent"] = 0.5 * r.k;
      rj["compact_exponent_trend"] = trend_json(r.compact_exponent_ratio->trend);
    }
    j["ratio"] = rj;
  } else if (r.ratio_error) {
    j["ratio"] = error_json(*r.ratio_error);
  }

  if (r.trace) {
    nlohmann::ordered_json tj;
    tj["target"] = optional_number(r.hausdorff_mass);
    tj["extrapolated"] = r.trace->extrapolated;
    tj["trend"] = trend_json(r.trace->curve.trend);
    if (r.trace_tail) {
      tj["tail"]["coef"] = r.trace_tail->coef;
      tj["tail"]["exponent"] = r.trace_tail->exponent;
    }
    j["trace"] = tj;
  } else if (r.trace_error) {
    j["trace"] = error_json(*r.trace_error);
  }

  nlohmann::ordered_json cons;
  cons["ratio_limit"] = optional_number(r.ratio_limit);
  cons["predicted"] = r.predicted_limit;
  cons["karamata"] = optional_number(r.karamata_limit);
  cons["consistent"] = r.consistent;
  j["consistency"] = cons;
  j["verdicts_hold"] = r.verdicts_hold();
  return j;
}

std::string curve_csv(const Curve& curve, const std::string& x_name, const std::string& y_name) {
  std::ostringstream os;
  os << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    os << format_double(curve.x[i]) << ',' << format_double(curve.y[i]) << '\n';
  }
  return os.str();
}

}  // namespace weyllab
