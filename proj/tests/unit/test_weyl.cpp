#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weyllab/error.hpp"
#include "weyllab/heat.hpp"
#include "weyllab/weyl.hpp"

using namespace weyllab;

namespace {

// int_0^pi s / m(B_s(x)) sin x dx with m(B_s(x)) = cos(max(0, x - s)) - cos(min(pi, x + s)).
double p1_criterion_oracle(long double s) {
  auto f = [s](long double x) {
    const long double a = std::max(0.0L, x - s);
    const long double b = std::min(oracle::kPi, x + s);
    return s * std::sin(x) / (std::cos(a) - std::cos(b));
  };
  return oracle::simpson(f, 0.0L, s, 2000) + oracle::simpson(f, s, oracle::kPi - s, 200000) +
         oracle::simpson(f, oracle::kPi - s, oracle::kPi, 2000);
}

}  // namespace

TEST_SUITE("weyl") {
  TEST_CASE("criterion integral") {
    CHECK(criterion_integral(Circle{}, 1, 0.3) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(criterion_integral(Circle{5.0}, 1, 1.0) == doctest::Approx(2.5).epsilon(1e-15));
    const double closed = oracle::kPi / 2 + 0.1 * (2 * std::log(2.0) - 1);
    CHECK(criterion_integral(WeightedInterval{0}, 1, 0.1) == doctest::Approx(closed).epsilon(1e-10));
    CHECK(std::fabs(criterion_integral(WeightedInterval{0}, 1, 0.1) - 1.609426) <= 1e-6);
    CHECK(criterion_integral(WeightedInterval{1}, 1, 1e-3) == doctest::Approx(p1_criterion_oracle(1e-3)).epsilon(1e-9));
    CHECK(criterion_integral(WeightedInterval{1}, 1, 0.2) == doctest::Approx(p1_criterion_oracle(0.2)).epsilon(1e-9));
    CHECK(criterion_integral(WeightedInterval{1}, 1, 1e-3) == doctest::Approx(oracle::kPi / 2).epsilon(1e-2));
    CHECK_THROWS_AS(criterion_integral(WeightedInterval{0}, 1, 0.0), Error);
    CHECK_THROWS_AS(criterion_integral(SuspensionTower{2, 0.0}, 2, 0.1), Error);
    try {
      criterion_integral(Gaussian{2}, 2, 0.1);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::noncompact);
    }
  }

  TEST_CASE("criterion verdicts") {
    const auto s = make_grid(1e-1, 1e-3, 5, GridScale::log);
    const CriterionVerdict p1 = criterion_verdict(WeightedInterval{1}, 1, s, 1e-3);
    CHECK(p1.finite);
    CHECK(p1.equal);
    CHECK(p1.limit_estimate == doctest::Approx(kPi / 2).epsilon(1e-4));
    CHECK(p1.pointwise_integral == doctest::Approx(kPi / 2).epsilon(1e-6));
    CHECK(std::isfinite(p1.dominating_bound));
    const CriterionVerdict circle = criterion_verdict(Circle{}, 1, s, 1e-3);
    CHECK(circle.limit_estimate == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(circle.pointwise_integral == doctest::Approx(kPi).epsilon(1e-12));
    for (double v : circle.values) CHECK(v == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(circle.finite);
    CHECK(circle.equal);
    CHECK_THROWS_AS(criterion_verdict(Gaussian{2}, 2, s, 1e-3), Error);
  }

  TEST_CASE("dominating bound stays below p + 2") {
    const auto s = make_grid(0.5, 1e-3, 4, GridScale::log);
    for (double p : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      const WeightedInterval space{p};
      const CriterionVerdict v = criterion_verdict(space, regular_dimension(space), s, 1e-3);
      CHECK(v.dominating_bound > 0.0);
      CHECK(v.dominating_bound <= p + 2.0);
      CHECK(v.equal);
    }
  }

  TEST_CASE("Weyl ratio curves") {
    const Spectrum p2 = build_spectrum(WeightedInterval{2}, {SpectrumMethod::oracle, 1e6});
    CHECK(weyl_ratio(p2, 1, {1e6}).y[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(predicted_weyl_limit(WeightedInterval{2}) == doctest::Approx(1.0).epsilon(1e-12));
    const Spectrum circle = build_spectrum(Circle{}, {SpectrumMethod::oracle, 1e6});
    CHECK(weyl_ratio(circle, 1, {1e6}).y[0] == doctest::Approx(2.001).epsilon(1e-12));
    CHECK(predicted_weyl_limit(Circle{}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(predicted_weyl_limit(SuspensionTower{2, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
    SpectrumRequest tower{SpectrumMethod::suspension, 1e3};
    tower.threads = 4;
    const Spectrum x2 = build_spectrum(SuspensionTower{2, 0.0}, tower);
    // l(l+1) <= 1000 for l <= 31: sum of l + 1 = 528
    CHECK(weyl_ratio(x2, 2, {1e3}).y[0] == doctest::Approx(528.0 / 1e3).epsilon(1e-12));
    CHECK_THROWS_AS(weyl_ratio(p2, 1, {2e6}), Error);
  }

  TEST_CASE("trace formula") {
    const auto theta = [](long double t) {
      return oracle::series([](long long k) { return k * k; }, [](long long) { return 1.0L; }, t);
    };
    const Spectrum p0 = build_spectrum(WeightedInterval{0}, {SpectrumMethod::oracle, 1e8});
    const TraceCurve tc = trace_formula(p0, 1, {1e-4, 1e-5, 1e-6});
    CHECK(tc.curve.y.back() == doctest::Approx(3.1434).epsilon(3e-4));
    CHECK(tc.curve.y.back() == doctest::Approx(std::sqrt(4 * kPi * 1e-6) * theta(1e-6L)).epsilon(1e-12));
    CHECK(tc.extrapolated == doctest::Approx(kPi).epsilon(1e-5));
    const Spectrum circle = build_spectrum(Circle{}, {SpectrumMethod::oracle, 1e8});
    CHECK(trace_formula(circle, 1, {1e-6}).curve.y[0] == doctest::Approx(2 * kPi).epsilon(1e-5));
    // Hemisphere: the tail past the computed spectrum is continued by N ~ lambda / 2.
    SpectrumRequest tower{SpectrumMethod::suspension, 2e3};
    tower.threads = 4;
    const Spectrum x2 = build_spectrum(SuspensionTower{2, 0.0}, tower);
    const auto hemisphere = [](long double t) {
      return oracle::series([](long long l) { return l * (l + 1); }, [](long long l) { return l + 1.0L; }, t);
    };
    const TraceCurve th = trace_formula(x2, 2, {1e-2}, fit_power_tail(x2, 1.0));
    CHECK(th.curve.y[0] == doctest::Approx(4 * kPi * 1e-2 * hemisphere(1e-2L)).epsilon(1e-6));
  }

  TEST_CASE("spectrum methods") {
    CHECK(method_from_name(method_name(SpectrumMethod::prufer)) == SpectrumMethod::prufer);
    CHECK_THROWS_AS(method_from_name("magic"), Error);
    CHECK(default_method(SuspensionTower{3, 0.0}) == SpectrumMethod::suspension);
    CHECK(default_method(Gaussian{2}) == SpectrumMethod::oracle);
    SpectrumRequest fd{SpectrumMethod::fd, 400};
    const Spectrum a = build_spectrum(WeightedInterval{1}, fd);
    const Spectrum b = build_spectrum(WeightedInterval{1}, {SpectrumMethod::prufer, 400});
    REQUIRE(a.entries().size() == b.entries().size());
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
      const double exact = static_cast<double>(i) * (i + 1);
      CHECK(b.entries()[i].lambda == doctest::Approx(exact).epsilon(1e-7));
      CHECK(a.entries()[i].lambda == doctest::Approx(exact).epsilon(1e-3));
    }
  }

  TEST_CASE("reports") {
    WeylConfig config;
    config.spectrum.lambda_max = 1e6;
    const WeylReport p2 = weyl_report(WeightedInterval{2}, config);
    REQUIRE(p2.ratio_limit.has_value());
    REQUIRE(p2.karamata_limit.has_value());
    REQUIRE(p2.trace.has_value());
    CHECK(*p2.ratio_limit == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(*p2.karamata_limit == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(p2.predicted_limit == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p2.consistent);
    CHECK(p2.verdicts_hold());
    CHECK(p2.k == 1);

    const WeylReport circle = weyl_report(Circle{}, config);
    CHECK(*circle.ratio_limit == doctest::Approx(2.0).epsilon(5e-3));
    CHECK(circle.trace->extrapolated == doctest::Approx(2 * kPi).epsilon(5e-3));
    // trace limit H^1 = (4 pi)^{1/2} a, ratio limit a / Gamma(3/2)
    CHECK(*circle.karamata_limit == doctest::Approx(circle.trace->extrapolated / std::sqrt(4 * kPi) /
                                                    std::tgamma(1.5)).epsilon(1e-12));
    CHECK(circle.consistent);

    WeylConfig gconfig;
    gconfig.spectrum.lambda_max = 200;
    const WeylReport g = weyl_report(Gaussian{2}, gconfig);
    CHECK(g.regime == "non-RCD*-Weyl regime");
    CHECK(g.ratio_exponent == 2.0);
    CHECK(*g.ratio_limit == doctest::Approx(0.5).epsilon(2e-2));
    CHECK(*g.ratio_limit == doctest::Approx(20301.0 / 40000.0).epsilon(1e-12));
    CHECK(!g.criterion.has_value());
    CHECK(!g.trace.has_value());
    // The compact exponent k/2 = 1 grows without bound.
    REQUIRE(g.compact_exponent_ratio.has_value());
    CHECK(g.compact_exponent_ratio->y.back() > 50.0);
    CHECK(g.compact_exponent_ratio->trend.log_slope > 0.5);
  }

  TEST_CASE("report sections fail independently") {
    WeylConfig config;
    config.spectrum.method = SpectrumMethod::fd;
    config.spectrum.lambda_max = 400;
    const WeylReport r = weyl_report(Circle{}, config);
    CHECK(r.spectrum_error.has_value());
    CHECK(r.criterion.has_value());
    CHECK(!r.verdicts_hold());
  }

  TEST_CASE("curve CSV") {
    const Curve c{{1.0, 2.0}, {3.0, 4.0}, {}};
    const std::string csv = curve_csv(c, "lambda", "ratio");
    CHECK(csv.rfind("lambda,ratio\n", 0) == 0);
  }
}
