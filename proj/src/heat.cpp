#include "weyllab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "detail/overloaded.hpp"
#include "weyllab/error.hpp"
#include "weyllab/io.hpp"

namespace weyllab {

using detail::Overloaded;

std::size_t SpectralResolution::snap(double x) const {
  const std::size_t n = nodes.size();
  if (n == 0) throw Error(ErrorCode::domain, "empty resolution");
  if (period > 0.0) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    const double spacing = period / static_cast<double>(n);
    return static_cast<std::size_t>(std::llround(r / spacing)) % n;
  }
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
  if (it == nodes.begin()) return 0;
  if (it == nodes.end()) return n - 1;
  const std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
  return (x - nodes[hi - 1] <= nodes[hi] - x) ? hi - 1 : hi;
}

SpectralResolution resolution_from_form(const TridiagonalForm& form, std::size_t modes, double tol,
                                        unsigned threads) {
  const auto pairs = tridiag_eigenpairs(form, modes, tol, threads);
  SpectralResolution res;
  std::ostringstream os;
  os << "finite-difference(p=" << format_double(form.exponent) << ", nodes=" << form.size() << ")";
  res.source = os.str();
  res.nodes = form.nodes;
  res.weights = form.node_weights;
  res.eigenvalues = pairs.values;
  for (double& v : res.eigenvalues) v = std::max(v, 0.0);
  res.functions = pairs.functions;
  return res;
}

SpectralResolution fourier_resolution(const Circle& circle, std::size_t nodes, std::size_t modes) {
  validate(ModelSpace{circle});
  if (nodes < 3) throw Error(ErrorCode::degenerate_grid, "Fourier resolution needs at least 3 nodes");
  const std::size_t max_modes = (nodes % 2 == 0) ? nodes - 1 : nodes;
  if (modes > max_modes) throw Error(ErrorCode::insufficient_modes, "more Fourier modes than nodes can resolve");
  const double length = circle.length;
  SpectralResolution res;
  res.source = "fourier(L=" + format_double(length) + ", nodes=" + std::to_string(nodes) + ")";
  res.period = length;
  res.nodes.resize(nodes);
  res.weights.assign(nodes, length / static_cast<double>(nodes));
  for (std::size_t j = 0; j < nodes; ++j) res.nodes[j] = length * static_cast<double>(j) / static_cast<double>(nodes);
  res.eigenvalues.resize(modes);
  res.functions.resize(modes * nodes);
  const double c0 = 1.0 / std::sqrt(length);
  const double c1 = std::sqrt(2.0 / length);
  for (std::size_t i = 0; i < modes; ++i) {
    const std::size_t k = (i + 1) / 2;
    const double w = 2.0 * kPi * static_cast<double>(k) / length;
    res.eigenvalues[i] = w * w;
    for (std::size_t j = 0; j < nodes; ++j) {
      // Reduce the phase exactly: k j mod nodes.
      const double phase = 2.0 * kPi * static_cast<double>((k * j) % nodes) / static_cast<double>(nodes);
      double value = c0;
      if (i > 0) value = (i % 2 == 1) ? c1 * std::cos(phase) : c1 * std::sin(phase);
      res.functions[i * nodes + j] = value;
    }
  }
  return res;
}

SpectralResolution cosine_resolution(std::size_t nodes, std::size_t modes) {
  if (nodes < 3) throw Error(ErrorCode::degenerate_grid, "cosine resolution needs at least 3 nodes");
  if (modes > nodes - 1) throw Error(ErrorCode::insufficient_modes, "more cosine modes than nodes can resolve");
  const double h = kPi / static_cast<double>(nodes - 1);
  SpectralResolution res;
  res.source = "cosine(nodes=" + std::to_string(nodes) + ")";
  res.nodes.resize(nodes);
  res.weights.assign(nodes, h);
  res.weights.front() = res.weights.back() = 0.5 * h;
  for (std::size_t j = 0; j < nodes; ++j) res.nodes[j] = static_cast<double>(j) * h;
  res.nodes.back() = kPi;
  res.eigenvalues.resize(modes);
  res.functions.resize(modes * nodes);
  const double c0 = 1.0 / std::sqrt(kPi);
  const double c1 = std::sqrt(2.0 / kPi);
  const std::size_t period = 2 * (nodes - 1);
  for (std::size_t k = 0; k < modes; ++k) {
    res.eigenvalues[k] = static_cast<double>(k * k);
    for (std::size_t j = 0; j < nodes; ++j) {
      const double phase = 2.0 * kPi * static_cast<double>((k * j) % period) / static_cast<double>(period);
      res.functions[k * nodes + j] = (k == 0) ? c0 : c1 * std::cos(phase);
    }
  }
  return res;
}

SpectralResolution make_resolution(const ModelSpace& space, const ResolutionOptions& options) {
  validate(space);
  return std::visit(
      Overloaded{
          [&](const WeightedInterval& s) {
            if (s.exponent == 0.0 && options.method != ResolutionMethod::finite_difference) {
              return cosine_resolution(options.nodes, options.modes);
            }
            if (options.method == ResolutionMethod::exact) {
              throw Error(ErrorCode::unsupported_variant, "no exact eigenbasis for weighted intervals with p > 0");
            }
            const auto form = assemble_form(s, static_cast<int>(options.nodes));
            return resolution_from_form(form, options.modes, 1e-11, options.threads);
          },
          [&](const Circle& s) {
            if (options.method == ResolutionMethod::finite_difference) {
              throw Error(ErrorCode::unsupported_variant, "circle resolutions use the Fourier basis");
            }
            return fourier_resolution(s, options.nodes, options.modes);
          },
          [&](const SuspensionTower&) -> SpectralResolution {
            throw Error(ErrorCode::unsupported_variant, "towers have no one-dimensional resolution");
          },
          [&](const Gaussian&) -> SpectralResolution {
            throw Error(ErrorCode::unsupported_variant, "Gaussian space has no compact resolution");
          },
      },
      space);
}

double heat_trace_tail_bound(const Spectrum& spectrum, double t) {
  const double cap = spectrum.complete_up_to();
  const double n_cap = static_cast<double>(spectrum.counting(cap));
  if (n_cap == 0.0 || cap <= 0.0) return std::numeric_limits<double>::infinity();
  // Growth exponent of N read off [cap/4, cap], padded by 1/2.
  const double n_quarter = static_cast<double>(spectrum.counting(0.25 * cap));
  double growth = 1.0;
  if (n_quarter > 0.0 && n_cap > n_quarter) growth = std::log(n_cap / n_quarter) / std::log(4.0);
  growth = std::max(growth, 0.0) + 0.5;
  // With N(y) <= N(cap) (y / cap)^g the tail is bounded by
  // N(cap) g x^{-g} Gamma(g, x), x = t cap.
  const double x = t * cap;
  const double tail = n_cap * growth * std::pow(x, -growth) * boost::math::tgamma(growth, x);
  return 100.0 * tail;
}

double heat_trace(const Spectrum& spectrum, double t, const std::optional<PowerTail>& tail) {
  if (!(t > 0.0)) throw Error(ErrorCode::domain, "heat trace needs t > 0");
  const double cap = spectrum.complete_up_to();
  CompensatedSum sum;
  for (const auto& e : spectrum.entries()) {
    if (e.lambda > cap) break;
    sum += static_cast<double>(e.multiplicity) * std::exp(-e.lambda * t);
  }
  if (tail) {
    sum += tail->laplace_beyond(cap, t);
    return sum.value();
  }
  const double z = sum.value();
  const double bound = heat_trace_tail_bound(spectrum, t);
  if (!(bound <= 1e-12 * z)) {
    std::ostringstream os;
    os << "spectrum complete up to " << cap << " cannot resolve Z(" << t << "): tail bound " << bound;
    throw Error(ErrorCode::truncation_unsound, os.str());
  }
  return z;
}

PowerTail fit_power_tail(const Spectrum& spectrum, double exponent) {
  const double cap = spectrum.complete_up_to();
  const double lo = 0.25 * cap;
  const double n_cap = static_cast<double>(spectrum.counting(cap));
  const double n_lo = static_cast<double>(spectrum.counting(lo));
  const double den = std::pow(cap, exponent) - std::pow(lo, exponent);
  if (!(den > 0.0)) throw Error(ErrorCode::domain, "cannot fit a tail on a degenerate range");
  return PowerTail{(n_cap - n_lo) / den, exponent};
}

namespace {

double dropped_tail(const SpectralResolution& res, std::size_t node, double t, std::size_t modes) {
  const std::size_t available = res.mode_count();
  if (available == 0) return std::numeric_limits<double>::infinity();
  double bound_sq = 0.0;
  for (std::size_t i = 0; i < available; ++i) bound_sq = std::max(bound_sq, res.phi(i, node) * res.phi(i, node));
  CompensatedSum tail;
  for (std::size_t i = modes; i < available; ++i) tail += std::exp(-res.eigenvalues[i] * t);
  if (available < res.node_count() && available >= 2) {
    // Modes never computed: geometric bound from the last gap.
    const double last = res.eigenvalues[available - 1];
    std::size_t below = available - 1;
    while (below > 0 && res.eigenvalues[below] == last) --below;
    const double gap = last - res.eigenvalues[below];
    if (gap * t <= 0.0) return std::numeric_limits<double>::infinity();
    tail += std::exp(-last * t) * std::exp(-gap * t) / (1.0 - std::exp(-gap * t));
  }
  return 100.0 * bound_sq * tail.value();
}

}  // namespace

DiagonalKernel spectral_diag_kernel(const SpectralResolution& res, double x, double t, std::size_t modes) {
  if (!(t > 0.0)) throw Error(ErrorCode::domain, "heat kernel needs t > 0");
  if (modes > res.mode_count()) {
    throw Error(ErrorCode::insufficient_modes, "requested " + std::to_string(modes) + " modes, resolution has " +
                                                   std::to_string(res.mode_count()));
  }
  DiagonalKernel out;
  out.node = res.snap(x);
  double dx = std::fabs(res.nodes[out.node] - x);
  if (res.period > 0.0) {
    dx = std::fmod(dx, res.period);
    dx = std::min(dx, res.period - dx);
  }
  out.snap_distance = dx;
  CompensatedSum sum;
  for (std::size_t i = 0; i < modes; ++i) {
    const double f = res.phi(i, out.node);
    sum += std::exp(-res.eigenvalues[i] * t) * f * f;
  }
  out.value = sum.value();
  out.dropped_tail = dropped_tail(res, out.node, t, modes);
  if (out.dropped_tail > 1e-10) {
    std::ostringstream os;
    os << "dropped modes may contribute up to " << out.dropped_tail << " at t=" << t;
    throw Error(ErrorCode::insufficient_modes, os.str());
  }
  return out;
}

double spectral_kernel(const SpectralResolution& res, std::size_t i, std::size_t j, double t, std::size_t modes) {
  if (modes > res.mode_count()) throw Error(ErrorCode::insufficient_modes, "not enough modes");
  CompensatedSum sum;
  for (std::size_t k = 0; k < modes; ++k) sum += std::exp(-res.eigenvalues[k] * t) * res.phi(k, i) * res.phi(k, j);
  return sum.value();
}

double resolution_trace(const SpectralResolution& res, double t, std::size_t modes) {
  if (modes > res.mode_count()) throw Error(ErrorCode::insufficient_modes, "not enough modes");
  CompensatedSum sum;
  for (std::size_t k = 0; k < modes; ++k) sum += std::exp(-res.eigenvalues[k] * t);
  return sum.value();
}

ShortTimeResult short_time_diag(const ModelSpace& space, const Point& x, const std::vector<double>& t_grid,
                                const ResolutionOptions& options) {
  if (t_grid.empty()) throw Error(ErrorCode::domain, "empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0 && t_grid[i] <= 1.0)) throw Error(ErrorCode::domain, "time grid must lie in (0, 1]");
    if (i > 0 && !(t_grid[i] < t_grid[i - 1])) throw Error(ErrorCode::domain, "time grid must be decreasing");
  }
  if (std::holds_alternative<SuspensionTower>(space) || std::holds_alternative<Gaussian>(space)) {
    throw Error(ErrorCode::unsupported_variant, "short-time diagnostics need ball volumes and a 1D resolution");
  }
  const RegularPointInfo info = density_at(space, x);
  const SpectralResolution res = make_resolution(space, options);

  ShortTimeResult out;
  out.t = t_grid;
  out.target = unit_ball_volume(info.k) / std::pow(4.0 * kPi, 0.5 * info.k);
  for (double t : t_grid) {
    const auto kernel = spectral_diag_kernel(res, x.coords[0], t, res.mode_count());
    out.node = kernel.node;
    out.snap_distance = kernel.snap_distance;
    const Point snapped{res.nodes[kernel.node]};
    out.values.push_back(ball_volume(space, snapped, std::sqrt(t)) * kernel.value);
  }
  const std::size_t n = out.values.size();
  out.extrapolated = n >= 2 ? richardson(std::sqrt(t_grid[n - 2]), out.values[n - 2], std::sqrt(t_grid[n - 1]),
                                         out.values[n - 1], 1.0)
                            : out.values.back();
  bool up = true, down = true;
  for (std::size_t i = 1; i < n; ++i) {
    up = up && out.values[i] >= out.values[i - 1];
    down = down && out.values[i] <= out.values[i - 1];
  }
  out.monotone = up || down;
  out.trend = summarize_sweep(t_grid, out.values);
  return out;
}

double trace_identity_residual(const SpectralResolution& res, double t, std::size_t modes) {
  const double trace = resolution_trace(res, t, modes);
  CompensatedSum integral;
  for (std::size_t j = 0; j < res.node_count(); ++j) {
    CompensatedSum diag;
    for (std::size_t k = 0; k < modes; ++k) {
      diag += std::exp(-res.eigenvalues[k] * t) * res.phi(k, j) * res.phi(k, j);
    }
    integral += res.weights[j] * diag.value();
  }
  return std::fabs(trace - integral.value());
}

double trace_identity_residual(const ModelSpace& space, double t, std::size_t modes, std::size_t quad_nodes) {
  ResolutionOptions options;
  options.nodes = quad_nodes;
  options.modes = modes;
  return trace_identity_residual(make_resolution(space, options), t, modes);
}

double chapman_kolmogorov_residual(const SpectralResolution& res, std::size_t node, double t, std::size_t modes) {
  CompensatedSum sum;
  for (std::size_t j = 0; j < res.node_count(); ++j) {
    const double k = spectral_kernel(res, node, j, t, modes);
    sum += res.weights[j] * k * k;
  }
  return std::fabs(sum.value() - spectral_kernel(res, node, node, 2.0 * t, modes));
}

RatioScan gaussian_ratio_scan(const ModelSpace& space, const SpectralResolution& res,
                              const std::vector<double>& x_grid, const std::vector<double>& t_grid) {
  if (x_grid.empty() || t_grid.empty()) throw Error(ErrorCode::domain, "empty scan grid");
  RatioScan scan;
  bool first = true;
  for (double xv : x_grid) {
    density_at(space, Point{xv});
    for (double t : t_grid) {
      const auto kernel = spectral_diag_kernel(res, xv, t, res.mode_count());
      const Point snapped{res.nodes[kernel.node]};
      const double ratio = ball_volume(space, snapped, std::sqrt(t)) * kernel.value;
      if (first || ratio < scan.min_ratio) {
        scan.min_ratio = ratio;
        scan.argmin_x = xv;
        scan.argmin_t = t;
      }
      if (first || ratio > scan.max_ratio) {
        scan.max_ratio = ratio;
        scan.argmax_x = xv;
        scan.argmax_t = t;
      }
      first = false;
    }
  }
  return scan;
}

RatioScan gaussian_ratio_scan(const ModelSpace& space, const std::vector<double>& x_grid,
                              const std::vector<double>& t_grid, const ResolutionOptions& options) {
  return gaussian_ratio_scan(space, make_resolution(space, options), x_grid, t_grid);
}

std::string short_time_csv(const ModelSpace& space, const Point& x, const ShortTimeResult& result) {
  std::ostringstream os;
  os << "# space=" << space_to_json(space).dump() << '\n';
  os << "# point=";
  for (std::size_t i = 0; i < x.coords.size(); ++i) os << (i ? " " : "") << format_double(x.coords[i]);
  os << '\n';
  os << "# target=" << format_double(result.target) << '\n';
  os << "t,value\n";
  for (std::size_t i = 0; i < result.t.size(); ++i) {
    os << format_double(result.t[i]) << ',' << format_double(result.values[i]) << '\n';
  }
  return os.str();
}

}  // namespace weyllab
