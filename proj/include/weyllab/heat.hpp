#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "weyllab/model_spaces.hpp"
#include "weyllab/numerics.hpp"
#include "weyllab/spectrum.hpp"
#include "weyllab/tridiagonal.hpp"

namespace weyllab {

/// Eigenpairs sampled on a node set with quadrature weights. The sampled
/// eigenfunctions are orthonormal for sum_j weights[j] u(x_j) v(x_j).
struct SpectralResolution {
  std::string source;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> eigenvalues;
  std::vector<double> functions;  // mode-major: functions[i * nodes.size() + j]

  std::size_t node_count() const noexcept { return nodes.size(); }
  std::size_t mode_count() const noexcept { return eigenvalues.size(); }
  double phi(std::size_t mode, std::size_t node) const noexcept {
    return functions[mode * nodes.size() + node];
  }
  /// Index of the node nearest to x (circle coordinates are reduced modulo the period).
  std::size_t snap(double x) const;
  double period = 0.0;  // > 0 for periodic node sets
};

SpectralResolution resolution_from_form(const TridiagonalForm& form, std::size_t modes, double tol = 1e-11,
                                        unsigned threads = 1);
/// Sampled Fourier basis on `nodes` equispaced points of the circle.
SpectralResolution fourier_resolution(const Circle& circle, std::size_t nodes, std::size_t modes);
/// Sampled cosine basis of the unweighted interval on a vertex grid with
/// trapezoidal weights (discrete orthonormality is exact for modes < nodes).
SpectralResolution cosine_resolution(std::size_t nodes, std::size_t modes);

enum class ResolutionMethod { automatic, finite_difference, exact };

struct ResolutionOptions {
  std::size_t nodes = 4097;
  std::size_t modes = 2000;
  ResolutionMethod method = ResolutionMethod::automatic;
  unsigned threads = 1;
};

/// Exact bases where available (circle, unweighted interval) under
/// `automatic`, finite differences otherwise.
SpectralResolution make_resolution(const ModelSpace& space, const ResolutionOptions& options);

/// Z(t) = sum mult e^{-lambda t} over eigenvalues <= complete_up_to. With no
/// tail model, throws truncation_unsound unless the heuristic tail bound is
/// below 1e-12 Z(t).
double heat_trace(const Spectrum& spectrum, double t, const std::optional<PowerTail>& tail = std::nullopt);
/// Heuristic bound on the eigenvalues beyond complete_up_to.
double heat_trace_tail_bound(const Spectrum& spectrum, double t);
/// Power-law continuation of N fitted on [Lambda/4, Lambda] with the given exponent.
PowerTail fit_power_tail(const Spectrum& spectrum, double exponent);

struct DiagonalKernel {
  double value = 0.0;
  std::size_t node = 0;
  double snap_distance = 0.0;
  double dropped_tail = 0.0;  // heuristic estimate of the truncated modes
};

/// p(x, x, t) from the first `modes` eigenpairs, x snapped to the nearest node.
DiagonalKernel spectral_diag_kernel(const SpectralResolution& res, double x, double t, std::size_t modes);
/// p(x_i, x_j, t) between two nodes.
double spectral_kernel(const SpectralResolution& res, std::size_t i, std::size_t j, double t, std::size_t modes);

/// Trace of the resolution's own spectrum truncated to `modes`.
double resolution_trace(const SpectralResolution& res, double t, std::size_t modes);

struct ShortTimeResult {
  std::vector<double> t;
  std::vector<double> values;  // m(B_sqrt(t)(x)) p(x, x, t)
  double extrapolated = 0.0;   // Richardson in sqrt(t), two levels
  double target = 0.0;         // omega_k / (4 pi)^{k/2}
  bool monotone = false;       // values move monotonically as t decreases
  Trend trend;
  std::size_t node = 0;
  double snap_distance = 0.0;
};

ShortTimeResult short_time_diag(const ModelSpace& space, const Point& x, const std::vector<double>& t_grid,
                                const ResolutionOptions& options);

/// |sum_{i<modes} e^{-lambda_i t} - sum_j w_j p(x_j, x_j, t)|.
double trace_identity_residual(const ModelSpace& space, double t, std::size_t modes, std::size_t quad_nodes);
double trace_identity_residual(const SpectralResolution& res, double t, std::size_t modes);

/// |sum_j w_j p(x, x_j, t)^2 - p(x, x, 2t)| at node i.
double chapman_kolmogorov_residual(const SpectralResolution& res, std::size_t node, double t, std::size_t modes);

struct RatioScan {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double argmin_x = 0.0, argmin_t = 0.0;
  double argmax_x = 0.0, argmax_t = 0.0;
};

/// Extrema of m(B_sqrt(t)(x)) p(x, x, t) over the product grid.
RatioScan gaussian_ratio_scan(const ModelSpace& space, const std::vector<double>& x_grid,
                              const std::vector<double>& t_grid, const ResolutionOptions& options);
RatioScan gaussian_ratio_scan(const ModelSpace& space, const SpectralResolution& res,
                              const std::vector<double>& x_grid, const std::vector<double>& t_grid);

/// `t,value` with comment lines naming the space, point and target.
std::string short_time_csv(const ModelSpace& space, const Point& x, const ShortTimeResult& result);

}  // namespace weyllab
