#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weyllab/error.hpp"
#include "weyllab/heat.hpp"

using namespace weyllab;

namespace {

double z_interval0(double t) {
  return oracle::series([](long long k) { return k * k; }, [](long long) { return 1.0L; }, t);
}

double z_circle(double t) {
  return oracle::series([](long long k) { return k * k; }, [](long long k) { return k == 0 ? 1.0L : 2.0L; }, t);
}

// Neumann heat kernel of [0, pi] at x from the cosine expansion.
double cosine_kernel(double x, double t) {
  long double sum = 1.0L / oracle::kPi;
  for (int k = 1; k < 400; ++k) {
    const long double c = std::cos(k * static_cast<long double>(x));
    sum += 2.0L / oracle::kPi * std::exp(-static_cast<long double>(k) * k * t) * c * c;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_SUITE("heat") {
  TEST_CASE("heat traces") {
    CHECK(heat_trace(Spectrum({{0.0, 1}}, 0.0), 3.0, PowerTail{0.0, 0.0}) == 1.0);
    const Spectrum interval = oracle_spectrum_up_to(WeightedInterval{0}, 2000.0);
    CHECK(heat_trace(interval, 1.0) == doctest::Approx(1.386319).epsilon(1e-6));
    CHECK(heat_trace(interval, 1.0) == doctest::Approx(z_interval0(1.0)).epsilon(1e-14));
    const Spectrum circle = oracle_spectrum_up_to(Circle{}, 2000.0);
    CHECK(heat_trace(circle, 1.0) == doctest::Approx(1.772637).epsilon(1e-6));
    CHECK(heat_trace(circle, 1.0) == doctest::Approx(z_circle(1.0)).epsilon(1e-14));
  }

  TEST_CASE("truncated spectra need a tail model") {
    const Spectrum s = oracle_spectrum_up_to(WeightedInterval{0}, 100.0);
    try {
      heat_trace(s, 1e-3);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::truncation_unsound);
    }
    const Spectrum wide = oracle_spectrum_up_to(WeightedInterval{0}, 2500.0);
    const PowerTail tail = fit_power_tail(wide, 0.5);
    // Head sum plus C int_Lambda^inf e^{-lambda t} d(lambda^g), by quadrature.
    const long double lam = wide.complete_up_to();
    long double head = 0.0L;
    for (const auto& e : wide.entries()) head += e.multiplicity * std::exp(-static_cast<long double>(e.lambda) * 1e-3L);
    const double beyond = oracle::simpson(
        [&](long double x) { return tail.coef * tail.exponent * std::pow(x, tail.exponent - 1) * std::exp(-x * 1e-3L); },
        lam, lam + 60000.0L, 200000);
    CHECK(heat_trace(wide, 1e-3, tail) == doctest::Approx(static_cast<double>(head) + beyond).epsilon(1e-10));
    // The continuous model ignores the half-step lattice offset past Lambda.
    CHECK(heat_trace(wide, 1e-3, tail) == doctest::Approx(z_interval0(1e-3)).epsilon(5e-3));
  }

  TEST_CASE("Z is decreasing and log-convex") {
    const Spectrum s = oracle_spectrum_up_to(WeightedInterval{1.5}, 1e6);
    const auto t = make_grid(1e-3, 2.0, 40, GridScale::log);
    std::vector<double> logz;
    for (double v : t) logz.push_back(std::log(heat_trace(s, v)));
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(logz[i] < logz[i - 1]);
    // second divided differences on the nonuniform grid
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
      const double d1 = (logz[i] - logz[i - 1]) / (t[i] - t[i - 1]);
      const double d2 = (logz[i + 1] - logz[i]) / (t[i + 1] - t[i]);
      CHECK(d2 - d1 >= -1e-10);
    }
  }

  TEST_CASE("diagonal kernels") {
    const auto cosine = make_resolution(WeightedInterval{0}, {});
    CHECK(spectral_diag_kernel(cosine, kPi / 2, 1.0, 2000).value == doctest::Approx(0.329970).epsilon(1e-4));
    CHECK(spectral_diag_kernel(cosine, kPi / 2, 1.0, 2000).value ==
          doctest::Approx(cosine_kernel(kPi / 2, 1.0)).epsilon(1e-12));
    CHECK(spectral_diag_kernel(cosine, 0.7, 0.05, 2000).value ==
          doctest::Approx(cosine_kernel(cosine.nodes[cosine.snap(0.7)], 0.05)).epsilon(1e-12));
    ResolutionOptions fourier_options;
    fourier_options.nodes = 512;
    fourier_options.modes = 401;
    const auto fourier = make_resolution(Circle{}, fourier_options);
    const auto kc = spectral_diag_kernel(fourier, 2.3, 1.0, fourier.mode_count());
    CHECK(kc.value == doctest::Approx(0.282125).epsilon(1e-4));
    CHECK(kc.value == doctest::Approx(z_circle(1.0) / (2 * kPi)).epsilon(1e-12));
    CHECK(kc.snap_distance <= kPi / 512 + 1e-15);
  }

  TEST_CASE("equilibrium at large time") {
    ResolutionOptions options;
    options.nodes = 1025;
    options.modes = 100;
    for (const ModelSpace& space : {ModelSpace{WeightedInterval{0}}, ModelSpace{WeightedInterval{2}}, ModelSpace{Circle{}}}) {
      const auto res = make_resolution(space, options);
      for (double x : {0.4, 1.5}) {
        const double v = spectral_diag_kernel(res, x, 100.0, res.mode_count()).value;
        // The finite-difference constant mode is normalized against the
        // discrete masses, which are exact integrals of the weight.
        CHECK(std::fabs(v - 1.0 / total_mass(space)) < 1e-8);
      }
    }
  }

  TEST_CASE("mode truncation is checked") {
    const auto res = cosine_resolution(1025, 20);
    try {
      spectral_diag_kernel(res, 1.0, 1e-3, 20);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::insufficient_modes);
    }
    CHECK_THROWS_AS(spectral_diag_kernel(res, 1.0, 1.0, 21), Error);
  }

  TEST_CASE("resolution orthonormality") {
    ResolutionOptions options;
    options.nodes = 1025;
    options.modes = 60;
    for (const ModelSpace& space : {ModelSpace{WeightedInterval{0}}, ModelSpace{WeightedInterval{0.5}}, ModelSpace{Circle{2.0}}}) {
      const auto res = make_resolution(space, options);
      double worst = 0.0;
      for (std::size_t a = 0; a < res.mode_count(); ++a) {
        for (std::size_t b = a; b < res.mode_count(); ++b) {
          CompensatedSum dot;
          for (std::size_t j = 0; j < res.node_count(); ++j) dot += res.weights[j] * res.phi(a, j) * res.phi(b, j);
          worst = std::max(worst, std::fabs(dot.value() - (a == b ? 1.0 : 0.0)));
        }
      }
      CHECK(worst < 1e-8);
    }
  }

  TEST_CASE("short-time diagonal behavior") {
    const auto circle = short_time_diag(Circle{}, Point{1.0}, {1e-1, 1e-2}, {});
    CHECK(circle.values.back() == doctest::Approx(0.564190).epsilon(1e-4));
    CHECK(circle.target == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-14));
    const auto p2 = short_time_diag(WeightedInterval{2}, Point{kPi / 2}, make_grid(1e-2, 1e-4, 5, GridScale::log), {});
    CHECK(std::fabs(p2.extrapolated - 0.564190) < 1e-2);
    CHECK(p2.snap_distance < 1e-12);
    const auto p0 = short_time_diag(WeightedInterval{0}, Point{1.0}, make_grid(1e-2, 1e-4, 5, GridScale::log), {});
    CHECK(std::fabs(p0.extrapolated - p0.target) < 1e-2);
    CHECK_THROWS_AS(short_time_diag(WeightedInterval{1}, Point{0.0}, {1e-2}, {}), Error);
    CHECK_THROWS_AS(short_time_diag(SuspensionTower{2, 0.0}, Point{1.0, 1.0}, {1e-2}, {}), Error);
    CHECK_THROWS_AS(short_time_diag(Circle{}, Point{1.0}, {1e-3, 1e-2}, {}), Error);
    // omega_2 / (4 pi)
    CHECK(unit_ball_volume(2) / (4 * kPi) == doctest::Approx(0.25));
  }

  TEST_CASE("trace identity") {
    CHECK(trace_identity_residual(WeightedInterval{0}, 1.0, 50, 1025) <= 1e-8);
    CHECK(trace_identity_residual(WeightedInterval{2}, 0.1, 200, 4097) <= 1e-8);
    CHECK(trace_identity_residual(Circle{}, 0.5, 201, 512) <= 1e-10);
  }

  TEST_CASE("Chapman-Kolmogorov on the discrete resolution") {
    ResolutionOptions options;
    options.nodes = 1025;
    options.modes = 300;
    for (const ModelSpace& space : {ModelSpace{WeightedInterval{1}}, ModelSpace{Circle{}}}) {
      const auto res = make_resolution(space, options);
      for (double t : {0.1, 1.0}) {
        for (std::size_t node : {std::size_t{100}, std::size_t{512}}) {
          CHECK(chapman_kolmogorov_residual(res, node, t, res.mode_count()) <= 1e-8);
        }
      }
    }
  }

  TEST_CASE("Gaussian-bound ratio scans") {
    const auto t = make_grid(1e-4, 1.0, 9, GridScale::log);
    std::vector<double> x;
    for (int i = 0; i < 16; ++i) x.push_back(2 * kPi * i / 16);
    ResolutionOptions fourier;
    fourier.nodes = 2048;
    fourier.modes = 2047;
    const RatioScan circle = gaussian_ratio_scan(Circle{}, x, t, fourier);
    CHECK(circle.min_ratio >= 0.56);
    CHECK(circle.max_ratio <= 1.01);
    std::vector<double> interior;
    for (int i = 1; i < 20; ++i) interior.push_back(kPi * i / 20);
    const RatioScan interval = gaussian_ratio_scan(WeightedInterval{0}, interior, t, {});
    CHECK(interval.min_ratio > 0.3);
    CHECK(interval.max_ratio < 1.2);
    const RatioScan single = gaussian_ratio_scan(WeightedInterval{0}, {1.0}, {0.1}, {});
    CHECK(single.min_ratio == single.max_ratio);
  }

  TEST_CASE("rescaling identity") {
    const ModelSpace space = WeightedInterval{2};
    const auto res = make_resolution(space, {});
    const double t = 1e-3;
    const Point x{res.nodes[1500]};
    const double vol = ball_volume(space, x, std::sqrt(t));
    const RescaledView view(space, std::sqrt(t), 1.0 / vol);
    const double base = spectral_diag_kernel(res, x.coords[0], view.base_time(1.0), res.mode_count()).value;
    CHECK(view.kernel_from_base(base) == doctest::Approx(vol * base).epsilon(1e-15));
    CHECK(view.ball_volume(x, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("short-time CSV") {
    const auto r = short_time_diag(Circle{}, Point{0.0}, {1e-1, 1e-2}, {});
    const std::string csv = short_time_csv(Circle{}, Point{0.0}, r);
    CHECK(csv.find("# target=") != std::string::npos);
    CHECK(csv.find("t,value\n") != std::string::npos);
  }
}
