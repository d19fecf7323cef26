#pragma once

#include <string>
#include <variant>
#include <vector>

namespace weyllab {

/// ([0, pi], |.|, sin^p t dt).
struct WeightedInterval {
  double exponent = 0.0;
  bool operator==(const WeightedInterval&) const = default;
};

/// Circle of length L with its arc-length measure.
struct Circle {
  double length = 2.0 * 3.14159265358979323846;
  bool operator==(const Circle&) const = default;
};

/// X_n: X_1 = WeightedInterval(base_exponent), X_{j+1} the spherical
/// suspension of X_j with radial measure sin t dt. Isometric to a hemisphere
/// of S^n.
struct SuspensionTower {
  int levels = 1;
  double base_exponent = 0.0;
  bool operator==(const SuspensionTower&) const = default;
};

/// (R^n, |.|, standard Gaussian measure).
struct Gaussian {
  int dim = 1;
  bool operator==(const Gaussian&) const = default;
};

using ModelSpace = std::variant<WeightedInterval, Circle, SuspensionTower, Gaussian>;

/// Coordinates of a point:
///  - interval: {t}, t in [0, pi]
///  - circle: {angle}, any real, arc-length parametrization modulo L
///  - tower: {t_1, ..., t_{n-1}, s}; t_1 is the outermost suspension
///    coordinate and s the coordinate in the base interval
///  - gaussian: the n Cartesian coordinates
struct Point {
  std::vector<double> coords;

  Point() = default;
  Point(std::initializer_list<double> c) : coords(c) {}
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
};

struct RegularPointInfo {
  int k = 0;
  double theta = 0.0;  // density of the measure w.r.t. H^k at the point
};

/// Validates parameter invariants; throws Error(domain) when violated.
void validate(const ModelSpace& space);

std::string kind_name(const ModelSpace& space);
bool is_compact(const ModelSpace& space);
/// pi for intervals and towers, L/2 for the circle; throws noncompact for Gaussian.
double diameter(const ModelSpace& space);
/// m(X). The Gaussian measure is a probability measure, so its total mass is 1.
double total_mass(const ModelSpace& space);

/// int_0^pi sin^p t dt = sqrt(pi) Gamma((p+1)/2) / Gamma(p/2 + 1).
double interval_total_mass(double exponent);
/// int_a^b sin^p t dt for 0 <= a <= b <= pi. Closed forms for p in {0, 1, 2},
/// adaptive Simpson otherwise.
double interval_mass(double exponent, double a, double b);

double ball_volume(const ModelSpace& space, const Point& x, double r);
RegularPointInfo density_at(const ModelSpace& space, const Point& x);
double hausdorff_mass(const ModelSpace& space);
int regular_dimension(const ModelSpace& space);

/// (X, d / r, C m). Ball volumes and heat kernels of the view are expressed
/// through the underlying space.
class RescaledView {
 public:
  RescaledView(ModelSpace space, double r, double mass_scale);

  const ModelSpace& base() const noexcept { return space_; }
  double distance_scale() const noexcept { return r_; }
  double mass_scale() const noexcept { return c_; }

  /// m'(B'_s(x)) = C m(B_{r s}(x)).
  double ball_volume(const Point& x, double s) const;
  double distance(double base_distance) const noexcept { return base_distance / r_; }
  /// Time in the base space matching time t in the view: r^2 t.
  double base_time(double t) const noexcept { return r_ * r_ * t; }
  /// p'(x, y, t) given p(x, y, r^2 t) of the base space.
  double kernel_from_base(double base_kernel_value) const noexcept { return base_kernel_value / c_; }

 private:
  ModelSpace space_;
  double r_;
  double c_;
};

RescaledView rescale(const ModelSpace& space, double r, double mass_scale);

}  // namespace weyllab
