#include "weyllab/model_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail/overloaded.hpp"
#include "weyllab/error.hpp"
#include "weyllab/numerics.hpp"

namespace weyllab {

using detail::Overloaded;

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::domain, std::string(what) + " must be finite");
}

void require_dims(const Point& x, std::size_t n, const char* kind) {
  if (x.coords.size() != n) {
    std::ostringstream os;
    os << kind << " point needs " << n << " coordinates, got " << x.coords.size();
    throw Error(ErrorCode::domain, os.str());
  }
  for (double c : x.coords) require_finite(c, "point coordinate");
}

void require_in_closed_interval(double t) {
  if (t < 0.0 || t > kPi) {
    throw Error(ErrorCode::domain, "coordinate outside [0, pi]");
  }
}

// Average of exp(z <w, e>) over the unit sphere S^{n-1}, times exp(-z).
double sphere_average_scaled(int n, double z) {
  if (z == 0.0) return 1.0;
  if (n == 1) return 0.5 * (1.0 + std::exp(-2.0 * z));
  const double nu = 0.5 * n - 1.0;
  if (z > 600.0) {
    // I_nu(z) e^{-z} ~ (2 pi z)^{-1/2} (1 - (4 nu^2 - 1)/(8z))
    const double scaled_i = (1.0 - (4.0 * nu * nu - 1.0) / (8.0 * z)) / std::sqrt(2.0 * kPi * z);
    return std::tgamma(0.5 * n) * std::pow(2.0 / z, nu) * scaled_i;
  }
  return std::tgamma(0.5 * n) * std::pow(2.0 / z, nu) * std::cyl_bessel_i(nu, z) * std::exp(-z);
}

double gaussian_ball(int n, const Point& x, double r) {
  double a2 = 0.0;
  for (double c : x.coords) a2 += c * c;
  const double a = std::sqrt(a2);
  if (n == 1) {
    const double c = x.coords[0];
    const double hi = (c + r) / std::sqrt(2.0);
    const double lo = (c - r) / std::sqrt(2.0);
    if (lo >= 0.0) return 0.5 * (std::erfc(lo) - std::erfc(hi));
    if (hi <= 0.0) return 0.5 * (std::erfc(-hi) - std::erfc(-lo));
    return 0.5 * (std::erf(hi) - std::erf(lo));
  }
  const double sphere_area = 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
  const double norm = sphere_area * std::pow(2.0 * kPi, -0.5 * n);
  // Radial density of |Z - x| at rho.
  auto radial = [&](double rho) {
    if (rho == 0.0) return n == 1 ? norm * std::exp(-0.5 * a2) : 0.0;
    const double gauss = std::exp(-0.5 * (a - rho) * (a - rho));
    return norm * std::pow(rho, n - 1) * gauss * sphere_average_scaled(n, a * rho);
  };
  const double upper = std::min(r, a + 40.0);
  const double lower = std::max(0.0, a - 40.0);
  if (upper <= lower) return 0.0;
  return adaptive_simpson(radial, lower, upper, 1e-10, 40);
}

}  // namespace

void validate(const ModelSpace& space) {
  std::visit(Overloaded{
                 [](const WeightedInterval& s) {
                   if (!std::isfinite(s.exponent) || s.exponent < 0.0) {
                     throw Error(ErrorCode::domain, "interval exponent must be finite and >= 0");
                   }
                 },
                 [](const Circle& s) {
                   if (!std::isfinite(s.length) || s.length <= 0.0) {
                     throw Error(ErrorCode::domain, "circle length must be positive");
                   }
                 },
                 [](const SuspensionTower& s) {
                   if (s.levels < 1) throw Error(ErrorCode::domain, "tower needs at least one level");
                   if (!std::isfinite(s.base_exponent) || s.base_exponent < 0.0) {
                     throw Error(ErrorCode::domain, "tower base exponent must be finite and >= 0");
                   }
                 },
                 [](const Gaussian& s) {
                   if (s.dim < 1) throw Error(ErrorCode::domain, "Gaussian dimension must be >= 1");
                 },
             },
             space);
}

std::string kind_name(const ModelSpace& space) {
  return std::visit(Overloaded{
                        [](const WeightedInterval&) { return std::string("interval"); },
                        [](const Circle&) { return std::string("circle"); },
                        [](const SuspensionTower&) { return std::string("tower"); },
                        [](const Gaussian&) { return std::string("gaussian"); },
                    },
                    space);
}

bool is_compact(const ModelSpace& space) { return !std::holds_alternative<Gaussian>(space); }

double diameter(const ModelSpace& space) {
  validate(space);
  return std::visit(Overloaded{
                        [](const WeightedInterval&) { return kPi; },
                        [](const Circle& s) { return 0.5 * s.length; },
                        [](const SuspensionTower&) { return kPi; },
                        [](const Gaussian&) -> double {
                          throw Error(ErrorCode::noncompact, "Gaussian space has infinite diameter");
                        },
                    },
                    space);
}

double interval_total_mass(double exponent) {
  return std::sqrt(kPi) * std::tgamma(0.5 * (exponent + 1.0)) / std::tgamma(0.5 * exponent + 1.0);
}

double interval_mass(double exponent, double a, double b) {
  a = std::clamp(a, 0.0, kPi);
  b = std::clamp(b, 0.0, kPi);
  if (b <= a) return 0.0;
  if (exponent == 0.0) return b - a;
  if (exponent == 1.0) return std::cos(a) - std::cos(b);
  if (exponent == 2.0) return 0.5 * (b - a) - 0.25 * (std::sin(2.0 * b) - std::sin(2.0 * a));
  const auto weight = [exponent](double t) { return std::pow(std::sin(t), exponent); };
  // sin is symmetric about pi/2; fold the right half so the endpoint
  // singularity of the integrand always sits at 0.
  const auto from_zero = [&](double u) {
    if (u <= 0.5 * kPi) return adaptive_simpson(weight, 0.0, u, 1e-12, 40);
    return interval_total_mass(exponent) - adaptive_simpson(weight, 0.0, kPi - u, 1e-12, 40);
  };
  if (a == 0.0) return from_zero(b);
  if (b == kPi) return from_zero(kPi - a);
  if (b - a < 0.5 * kPi) return adaptive_simpson(weight, a, b, 1e-12, 40);
  return from_zero(b) - from_zero(a);
}

double total_mass(const ModelSpace& space) {
  validate(space);
  return std::visit(Overloaded{
                        [](const WeightedInterval& s) { return interval_total_mass(s.exponent); },
                        [](const Circle& s) { return s.length; },
                        [](const SuspensionTower& s) {
                          return std::ldexp(interval_total_mass(s.base_exponent), s.levels - 1);
                        },
                        [](const Gaussian&) { return 1.0; },
                    },
                    space);
}

double ball_volume(const ModelSpace& space, const Point& x, double r) {
  validate(space);
  if (!(r > 0.0)) throw Error(ErrorCode::domain, "ball radius must be positive");
  return std::visit(
      Overloaded{
          [&](const WeightedInterval& s) {
            require_dims(x, 1, "interval");
            require_in_closed_interval(x.coords[0]);
            if (r >= kPi) return interval_total_mass(s.exponent);
            return interval_mass(s.exponent, x.coords[0] - r, x.coords[0] + r);
          },
          [&](const Circle& s) {
            require_dims(x, 1, "circle");
            return std::min(2.0 * r, s.length);
          },
          [&](const SuspensionTower&) -> double {
            throw Error(ErrorCode::unsupported_variant,
                        "geodesic ball volumes are not available on suspension towers");
          },
          [&](const Gaussian& s) {
            require_dims(x, static_cast<std::size_t>(s.dim), "gaussian");
            return gaussian_ball(s.dim, x, r);
          },
      },
      space);
}

RegularPointInfo density_at(const ModelSpace& space, const Point& x) {
  validate(space);
  return std::visit(
      Overloaded{
          [&](const WeightedInterval& s) {
            require_dims(x, 1, "interval");
            const double t = x.coords[0];
            require_in_closed_interval(t);
            if (t == 0.0 || t == kPi) {
              throw Error(ErrorCode::boundary_point, "interval endpoints are not regular points");
            }
            return RegularPointInfo{1, std::pow(std::sin(t), s.exponent)};
          },
          [&](const Circle&) {
            require_dims(x, 1, "circle");
            return RegularPointInfo{1, 1.0};
          },
          [&](const SuspensionTower& s) {
            const int n = s.levels;
            require_dims(x, static_cast<std::size_t>(n), "tower");
            for (double c : x.coords) {
              require_in_closed_interval(c);
              if (c == 0.0 || c == kPi) {
                throw Error(ErrorCode::boundary_point, "point lies on the singular axis of the tower");
              }
            }
            // m_d = sin t dt x m_{d-1} against H^d = sin^{d-1} t dt x H^{d-1}.
            double theta = std::pow(std::sin(x.coords[n - 1]), s.base_exponent);
            for (int j = 0; j + 1 < n; ++j) {
              const int level = n - j;
              theta *= std::pow(std::sin(x.coords[j]), 2 - level);
            }
            return RegularPointInfo{n, theta};
          },
          [&](const Gaussian& s) {
            require_dims(x, static_cast<std::size_t>(s.dim), "gaussian");
            double r2 = 0.0;
            for (double c : x.coords) r2 += c * c;
            return RegularPointInfo{s.dim, std::pow(2.0 * kPi, -0.5 * s.dim) * std::exp(-0.5 * r2)};
          },
      },
      space);
}

double hausdorff_mass(const ModelSpace& space) {
  validate(space);
  return std::visit(Overloaded{
                        [](const WeightedInterval&) { return kPi; },
                        [](const Circle& s) { return s.length; },
                        [](const SuspensionTower& s) {
                          // Half the area of the unit n-sphere.
                          const double n = s.levels;
                          return std::pow(kPi, 0.5 * (n + 1.0)) / std::tgamma(0.5 * (n + 1.0));
                        },
                        [](const Gaussian&) -> double {
                          throw Error(ErrorCode::noncompact,
                                      "Hausdorff mass of the regular set is infinite for Gaussian space");
                        },
                    },
                    space);
}

int regular_dimension(const ModelSpace& space) {
  validate(space);
  return std::visit(Overloaded{
                        [](const WeightedInterval&) { return 1; },
                        [](const Circle&) { return 1; },
                        [](const SuspensionTower& s) { return s.levels; },
                        [](const Gaussian& s) { return s.dim; },
                    },
                    space);
}

RescaledView::RescaledView(ModelSpace space, double r, double mass_scale)
    : space_(std::move(space)), r_(r), c_(mass_scale) {
  validate(space_);
  if (!(r_ > 0.0) || !(c_ > 0.0) || !std::isfinite(r_) || !std::isfinite(c_)) {
    throw Error(ErrorCode::domain, "rescaling factors must be positive and finite");
  }
}

double RescaledView::ball_volume(const Point& x, double s) const {
  return c_ * weyllab::ball_volume(space_, x, r_ * s);
}

RescaledView rescale(const ModelSpace& space, double r, double mass_scale) {
  return RescaledView(space, r, mass_scale);
}

}  // namespace weyllab
