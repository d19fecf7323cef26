#include "weyllab/sturm_liouville.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "weyllab/error.hpp"
#include "weyllab/numerics.hpp"

namespace weyllab {

namespace {

namespace odeint = boost::numeric::odeint;

using PhaseState = std::array<double, 1>;

struct NormalForm {
  double energy;  // lambda + a^2/4
  double kappa;   // mu + (a/2)(a/2 - 1)
  double scale;   // Prufer scale S
  double s;       // Frobenius exponent of v = sin^{a/2} phi
};

NormalForm normal_form(const RadialProblem& problem, double lambda) {
  const double half = 0.5 * problem.exponent;
  NormalForm nf;
  nf.energy = lambda + half * half;
  nf.kappa = problem.mu + half * (half - 1.0);
  nf.scale = std::sqrt(std::max(nf.energy, 0.0) + 1.0);
  nf.s = frobenius_exponent(problem) + half;
  return nf;
}

// t v'/v for v = sqrt(t) Z_nu(sqrt(|e|) t), Z = J for e > 0 and I for e < 0.
// The ratio Z_{nu+1}/Z_nu comes from its continued fraction.
double bessel_log_derivative(double nu, double e, double t) {
  const double z = std::sqrt(std::fabs(e)) * t;
  if (z < 1e-300) return nu + 0.5;
  const double sign = e > 0.0 ? -1.0 : 1.0;
  const int terms = 40 + static_cast<int>(2.0 * z);
  double ratio = 0.0;
  for (int m = terms; m >= 1; --m) ratio = 1.0 / (2.0 * (nu + m) / z + sign * ratio);
  return nu + 0.5 + sign * z * ratio;
}

}  // namespace

double frobenius_exponent(const RadialProblem& problem) {
  const double a = problem.exponent;
  // mu = 0: the constant-like solution; the natural boundary condition of the
  // weighted form picks it even when both roots are bounded.
  if (problem.mu == 0.0) return 0.0;
  return 0.5 * (-(a - 1.0) + std::sqrt((a - 1.0) * (a - 1.0) + 4.0 * problem.mu));
}

double prufer_phase(const RadialProblem& problem, double lambda, const PruferOptions& options) {
  if (problem.mu < 0.0 || problem.exponent < 0.0) {
    throw Error(ErrorCode::domain, "radial problem needs mu >= 0 and a >= 0");
  }
  const NormalForm nf = normal_form(problem, lambda);
  const double half_pi = 0.5 * kPi;

  // v'' + q v = 0 with q = E - kappa / sin^2 t. Prufer: S v = r sin(theta), v' = r cos(theta).
  auto rhs = [&nf](const PhaseState& x, PhaseState& dxdt, double t) {
    const double st = std::sin(t);
    const double q = nf.energy - nf.kappa / (st * st);
    const double c = std::cos(x[0]);
    const double sn = std::sin(x[0]);
    dxdt[0] = nf.scale * c * c + (q / nf.scale) * sn * sn;
  };

  // Near t = 0 the normal form is v'' + (E0 - kappa / t^2) v = 0 up to
  // O(kappa t^2), solved by sqrt(t) J_nu(sqrt(E0) t) with nu = s - 1/2.
  const double e0 = nf.energy - nf.kappa / 3.0;
  double t0 = std::min(3e-3, 0.5 / std::sqrt(std::fabs(e0) + 1.0));
  t0 = std::max(t0, options.epsilon);
  if (nf.s > 1.0 && nf.kappa > 0.0) {
    // The regular branch dominates by (t / t0)^{2s - 1}; skip the stiff
    // stretch but stay short of the turning point.
    const double turning =
        nf.energy > nf.kappa ? std::asin(std::sqrt(nf.kappa / nf.energy)) : half_pi;
    const double shrink = std::pow(1e-16, 1.0 / (2.0 * nf.s - 1.0));
    t0 = std::max(t0, std::min(shrink * turning, 0.5 * half_pi));
  }
  const double log_deriv_times_t = bessel_log_derivative(nf.s - 0.5, e0, t0);
  PhaseState state{std::atan2(nf.scale * t0, log_deriv_times_t)};

  auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                         odeint::runge_kutta_dopri5<PhaseState>());
  const double dt0 = std::min(1e-3, 0.1 / nf.scale);
  odeint::integrate_adaptive(stepper, rhs, state, t0, half_pi, dt0);
  return state[0];
}

std::int64_t radial_count(const RadialProblem& problem, double lambda, const PruferOptions& options) {
  const double theta = prufer_phase(problem, lambda, options);
  if (theta < 0.5 * kPi) return 0;
  return static_cast<std::int64_t>(std::floor(theta / (0.5 * kPi) + 1e-12));
}

namespace {

double phase_residual(const RadialProblem& problem, int k, double lambda, const PruferOptions& options) {
  return prufer_phase(problem, lambda, options) - 0.5 * kPi * (k + 1);
}

}  // namespace

double radial_eigenvalue(const RadialProblem& problem, int k, double lo, double hi, double tol,
                         const PruferOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorCode::domain, "tolerance must be positive");
  double f_lo = phase_residual(problem, k, lo, options);
  double f_hi = phase_residual(problem, k, hi, options);
  // Phase noise of the integrator; an endpoint this close is the root.
  constexpr double kPhaseNoise = 1e-8;
  if (std::fabs(f_lo) <= kPhaseNoise) return lo;
  if (std::fabs(f_hi) <= kPhaseNoise) return hi;
  if (f_lo > 0.0 || f_hi < 0.0) {
    throw Error(ErrorCode::bracketing_failure, "phase condition has no sign change in the bracket");
  }
  // Illinois-safeguarded bisection: regula falsi steps with a bisection
  // fallback whenever the bracket fails to halve.
  int side = 0;
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    const double width = hi - lo;
    double mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const double f_mid = phase_residual(problem, k, mid, options);
    if (f_mid == 0.0) return mid;
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      f_hi = f_mid;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo > 0.5 * width) {
      // Slow progress: force a bisection step.
      const double half = 0.5 * (lo + hi);
      const double f_half = phase_residual(problem, k, half, options);
      if (f_half == 0.0) return half;
      if (f_half < 0.0) {
        lo = half;
        f_lo = f_half;
      } else {
        hi = half;
        f_hi = f_half;
      }
      side = 0;
    }
  }
  throw Error(ErrorCode::nonconvergence, "radial eigenvalue search exceeded 200 iterations");
}

double prufer_eigenvalue(const WeightedInterval& space, int k, double tol, const PruferOptions& options) {
  validate(ModelSpace{space});
  if (k < 0) throw Error(ErrorCode::domain, "eigenvalue index must be >= 0");
  const RadialProblem problem{space.exponent, 0.0};
  const double bound = 2.0 * (k + space.exponent + 2.0);
  return radial_eigenvalue(problem, k, 0.0, bound * bound, tol, options);
}

Spectrum prufer_spectrum(const WeightedInterval& space, int count, double tol, const PruferOptions& options) {
  if (count < 1) throw Error(ErrorCode::domain, "count must be >= 1");
  std::vector<double> values(count);
  for (int k = 0; k < count; ++k) values[k] = prufer_eigenvalue(space, k, tol, options);
  return Spectrum::from_values(values, values.back());
}

Spectrum suspension_spectrum(const Spectrum& base, double radial_exponent, double lambda_max,
                             const SuspensionOptions& options) {
  if (!(lambda_max >= 0.0)) throw Error(ErrorCode::domain, "lambda_max must be nonnegative");
  if (radial_exponent < 0.0) throw Error(ErrorCode::domain, "radial exponent must be >= 0");
  if (base.complete_up_to() < lambda_max) {
    throw Error(ErrorCode::incomplete_base,
                "base spectrum is only complete up to " + std::to_string(base.complete_up_to()) +
                    " but lambda_max is " + std::to_string(lambda_max));
  }
  // Base modes with mu > lambda_max cannot contribute.
  std::vector<SpectralLevel> modes;
  for (const auto& e : base.entries()) {
    if (e.lambda <= lambda_max) modes.push_back(e);
  }

  std::vector<std::vector<SpectralLevel>> per_mode(modes.size());
  parallel_for(modes.size(), options.threads, [&](std::size_t i) {
    const RadialProblem problem{radial_exponent, modes[i].lambda};
    const std::int64_t count = radial_count(problem, lambda_max, options.prufer);
    double lo = modes[i].lambda;
    auto& out = per_mode[i];
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
      const double tol = options.tol * (1.0 + lambda_max);
      double hi = lambda_max;
      // The count at lambda_max was read off a phase within roundoff of a
      // threshold; widen so the top eigenvalue stays bracketed.
      if (k + 1 == count) hi = lambda_max * (1.0 + 1e-9) + 1e-9;
      const double value = radial_eigenvalue(problem, static_cast<int>(k), lo, hi, tol, options.prufer);
      if (value <= lambda_max * (1.0 + 1e-9) + 1e-9) out.push_back({value, modes[i].multiplicity});
      lo = value;
    }
  });

  std::vector<SpectralLevel> all;
  for (const auto& chunk : per_mode) all.insert(all.end(), chunk.begin(), chunk.end());
  return Spectrum::from_levels(std::move(all), lambda_max);
}

Spectrum tower_spectrum(const SuspensionTower& tower, double lambda_max, const SuspensionOptions& options) {
  validate(ModelSpace{tower});
  Spectrum current = oracle_spectrum_up_to(WeightedInterval{tower.base_exponent}, lambda_max);
  for (int level = 1; level < tower.levels; ++level) {
    current = suspension_spectrum(current, 1.0, lambda_max, options);
  }
  return current;
}

}  // namespace weyllab
