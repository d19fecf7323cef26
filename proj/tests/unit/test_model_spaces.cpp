#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "weyllab/error.hpp"
#include "weyllab/model_spaces.hpp"
#include "weyllab/numerics.hpp"

using namespace weyllab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::domain;
}

// Gaussian measure of B_r(x) in the plane: polar coordinates about x, with the
// periodic trapezoid rule in angle.
double planar_gaussian_ball(double x0, double x1, double r) {
  const int na = 256;
  return oracle::simpson(
      [&](long double rho) {
        long double ring = 0.0L;
        for (int i = 0; i < na; ++i) {
          const long double a = 2.0L * oracle::kPi * i / na;
          const long double px = x0 + rho * std::cos(a), py = x1 + rho * std::sin(a);
          ring += std::exp(-0.5L * (px * px + py * py));
        }
        return rho * ring * (2.0L * oracle::kPi / na) / (2.0L * oracle::kPi);
      },
      0.0L, r, 2000);
}

}  // namespace

TEST_SUITE("model_spaces") {
  TEST_CASE("validation") {
    CHECK(code_of([] { validate(WeightedInterval{-0.5}); }) == ErrorCode::domain);
    CHECK(code_of([] { validate(Circle{0.0}); }) == ErrorCode::domain);
    CHECK(code_of([] { validate(SuspensionTower{0, 0.0}); }) == ErrorCode::domain);
    CHECK(code_of([] { validate(Gaussian{0}); }) == ErrorCode::domain);
    CHECK(kind_name(SuspensionTower{2, 0.0}) == "tower");
  }

  TEST_CASE("diameters and masses") {
    CHECK(diameter(WeightedInterval{1.5}) == doctest::Approx(kPi));
    CHECK(diameter(Circle{3.0}) == doctest::Approx(1.5));
    CHECK(diameter(SuspensionTower{3, 0.5}) == doctest::Approx(kPi));
    CHECK(code_of([] { diameter(Gaussian{2}); }) == ErrorCode::noncompact);
    CHECK(total_mass(WeightedInterval{1}) == doctest::Approx(2.0));
    CHECK(total_mass(WeightedInterval{2}) == doctest::Approx(kPi / 2));
    CHECK(total_mass(Gaussian{3}) == 1.0);
    for (double p : {0.0, 0.5, 1.0, 2.0, 3.7}) {
      const double expected = oracle::simpson([&](long double t) { return std::pow(std::fabs(std::sin(t)), p); }, 0.0L,
                                              oracle::kPi, 400000);
      CHECK(interval_total_mass(p) == doctest::Approx(expected).epsilon(1e-8));
    }
  }

  TEST_CASE("interval ball volumes") {
    // int_0^{1/2} sin^2 = 1/4 - sin(1)/4
    CHECK(ball_volume(WeightedInterval{2}, Point{0.0}, 0.5) == doctest::Approx(0.0396323).epsilon(1e-6));
    CHECK(ball_volume(WeightedInterval{2}, Point{0.0}, 0.5) == doctest::Approx(0.25 - std::sin(1.0) / 4).epsilon(1e-14));
    CHECK(ball_volume(WeightedInterval{0}, Point{1.0}, 0.5) == doctest::Approx(1.0));
    CHECK(ball_volume(WeightedInterval{1}, Point{kPi / 2}, 10.0) == doctest::Approx(2.0));
    for (double p : {0.5, 3.7}) {
      for (double x : {0.0, 0.3, 1.7, kPi}) {
        const double lo = std::max(0.0, x - 0.4), hi = std::min(kPi, x + 0.4);
        const double expected =
            oracle::simpson([&](long double t) { return std::pow(std::sin(t), p); }, lo, hi, 200000);
        CHECK(ball_volume(WeightedInterval{p}, Point{x}, 0.4) == doctest::Approx(expected).epsilon(1e-8));
      }
    }
    CHECK(code_of([] { ball_volume(WeightedInterval{1}, Point{4.0}, 0.1); }) == ErrorCode::domain);
    CHECK(code_of([] { ball_volume(WeightedInterval{1}, Point{1.0}, 0.0); }) == ErrorCode::domain);
  }

  TEST_CASE("ball volumes grow with the radius") {
    const std::vector<ModelSpace> spaces{WeightedInterval{0.5}, WeightedInterval{3}, Circle{}, Gaussian{1}, Gaussian{2}};
    for (const auto& space : spaces) {
      const std::size_t dim = std::holds_alternative<Gaussian>(space) ? std::get<Gaussian>(space).dim : 1;
      const Point x(std::vector<double>(dim, 0.7));
      double previous = 0.0;
      for (double r = 0.05; r < 4.0; r += 0.05) {
        const double v = ball_volume(space, x, r);
        CHECK(v >= previous - 1e-12);
        CHECK(v <= total_mass(space) + 1e-12);
        previous = v;
      }
    }
  }

  TEST_CASE("circle and Gaussian balls") {
    CHECK(ball_volume(Circle{}, Point{12.0}, 1.0) == doctest::Approx(2.0));
    CHECK(ball_volume(Circle{}, Point{0.0}, 4.0) == doctest::Approx(2 * kPi));
    CHECK(ball_volume(Gaussian{1}, Point{0.0}, 1.0) == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-12));
    CHECK(ball_volume(Gaussian{2}, Point{0.0, 0.0}, 1.5) ==
          doctest::Approx(1.0 - std::exp(-1.125)).epsilon(1e-9));
    CHECK(ball_volume(Gaussian{2}, Point{0.8, -0.3}, 0.9) ==
          doctest::Approx(planar_gaussian_ball(0.8, -0.3, 0.9)).epsilon(1e-8));
    // chi distribution with 3 degrees of freedom
    const double r = 1.2;
    const double chi3 = std::erf(r / std::sqrt(2.0)) - std::sqrt(2.0 / kPi) * r * std::exp(-0.5 * r * r);
    CHECK(ball_volume(Gaussian{3}, Point{0.0, 0.0, 0.0}, r) == doctest::Approx(chi3).epsilon(1e-9));
    CHECK(code_of([] { ball_volume(SuspensionTower{2, 0.0}, Point{1.0, 1.0}, 0.1); }) ==
          ErrorCode::unsupported_variant);
  }

  TEST_CASE("densities") {
    CHECK(density_at(WeightedInterval{2}, Point{kPi / 2}).theta == doctest::Approx(1.0));
    CHECK(density_at(WeightedInterval{0.5}, Point{0.3}).theta == doctest::Approx(std::sqrt(std::sin(0.3))));
    CHECK(density_at(Circle{}, Point{5.0}).theta == 1.0);
    CHECK(density_at(Gaussian{2}, Point{0.0, 0.0}).theta == doctest::Approx(1.0 / (2 * kPi)));
    CHECK(density_at(Gaussian{2}, Point{1.0, 1.0}).k == 2);
    CHECK(code_of([] { density_at(WeightedInterval{1}, Point{0.0}); }) == ErrorCode::boundary_point);
    CHECK(code_of([] { density_at(WeightedInterval{1}, Point{kPi}); }) == ErrorCode::boundary_point);
    CHECK(code_of([] { density_at(SuspensionTower{2, 0.0}, Point{0.0, 1.0}); }) == ErrorCode::boundary_point);
    // Two levels: m = sin t dt ds is the round measure of the hemisphere.
    CHECK(density_at(SuspensionTower{2, 0.0}, Point{0.4, 1.0}).theta == doctest::Approx(1.0));
    CHECK(density_at(SuspensionTower{2, 2.0}, Point{0.4, 1.0}).theta == doctest::Approx(std::pow(std::sin(1.0), 2)));
    // Three levels: m = sin t1 sin t2 dt1 dt2 ds, H^3 = sin^2 t1 sin t2 dt1 dt2 ds.
    CHECK(density_at(SuspensionTower{3, 0.0}, Point{0.4, 1.0, 2.0}).theta == doctest::Approx(1.0 / std::sin(0.4)));
  }

  TEST_CASE("density agrees with small balls") {
    for (double p : {0.0, 0.5, 2.0}) {
      const double x = 1.1, s = 1e-4;
      const double ratio = ball_volume(WeightedInterval{p}, Point{x}, s) / (unit_ball_volume(1) * s);
      CHECK(ratio == doctest::Approx(density_at(WeightedInterval{p}, Point{x}).theta).epsilon(1e-6));
    }
    const double s = 1e-3;
    const double ratio = ball_volume(Gaussian{2}, Point{0.5, 0.2}, s) / (kPi * s * s);
    CHECK(ratio == doctest::Approx(density_at(Gaussian{2}, Point{0.5, 0.2}).theta).epsilon(1e-5));
  }

  TEST_CASE("Hausdorff masses and dimensions") {
    CHECK(hausdorff_mass(WeightedInterval{3}) == doctest::Approx(kPi));
    CHECK(hausdorff_mass(Circle{5.0}) == doctest::Approx(5.0));
    CHECK(hausdorff_mass(SuspensionTower{2, 0.7}) == doctest::Approx(2 * kPi));
    CHECK(hausdorff_mass(SuspensionTower{3, 0.0}) == doctest::Approx(kPi * kPi));
    CHECK(code_of([] { hausdorff_mass(Gaussian{1}); }) == ErrorCode::noncompact);
    CHECK(regular_dimension(SuspensionTower{3, 0.5}) == 3);
    CHECK(regular_dimension(Gaussian{4}) == 4);
    CHECK(regular_dimension(Circle{}) == 1);
  }

  TEST_CASE("rescaled views") {
    const ModelSpace space = WeightedInterval{1};
    const double t = 0.01;
    const Point x{1.0};
    const double c = 1.0 / ball_volume(space, x, std::sqrt(t));
    const RescaledView view = rescale(space, std::sqrt(t), c);
    CHECK(view.ball_volume(x, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(view.base_time(1.0) == doctest::Approx(t).epsilon(1e-15));
    CHECK(view.distance(0.2) == doctest::Approx(2.0));
    CHECK(view.kernel_from_base(3.0) == doctest::Approx(3.0 / c).epsilon(1e-15));
    CHECK(code_of([&] { rescale(space, 0.0, 1.0); }) == ErrorCode::domain);
  }
}
