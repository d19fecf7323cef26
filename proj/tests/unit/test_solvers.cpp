#include <doctest.h>

#include <cmath>

#include "weyllab/error.hpp"
#include "weyllab/numerics.hpp"
#include "weyllab/sturm_liouville.hpp"
#include "weyllab/tridiagonal.hpp"

using namespace weyllab;

TEST_SUITE("tridiagonal") {
  TEST_CASE("three-node unweighted grid") {
    // h = pi/2, masses (h/2, h, h/2): eigenvalues 0, 2/h^2, 4/h^2.
    const auto values = tridiag_eigenvalue_list(assemble_form(WeightedInterval{0}, 3), 3, 1e-14);
    CHECK(std::fabs(values[0]) < 1e-12);
    CHECK(values[1] == doctest::Approx(8.0 / (kPi * kPi)).epsilon(1e-12));
    CHECK(values[2] == doctest::Approx(16.0 / (kPi * kPi)).epsilon(1e-12));
  }

  TEST_CASE("degenerate grids are rejected") {
    try {
      assemble_form(WeightedInterval{2}, 2);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::degenerate_grid);
    }
  }

  TEST_CASE("second-order convergence to k(k+p)") {
    for (double p : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      const auto coarse = tridiag_eigenvalue_list(assemble_form(WeightedInterval{p}, 1024), 10, 1e-13);
      const auto fine = tridiag_eigenvalue_list(assemble_form(WeightedInterval{p}, 2048), 10, 1e-13);
      for (int k = 1; k < 10; ++k) {
        const double exact = k * (k + p);
        const double e1 = std::fabs(coarse[k] - exact), e2 = std::fabs(fine[k] - exact);
        CHECK(e2 / exact < 2e-4);
        CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
      }
    }
  }

  TEST_CASE("Sturm counts") {
    const auto form = assemble_form(WeightedInterval{1}, 257);
    const auto values = tridiag_eigenvalue_list(form, 20, 1e-12);
    for (std::size_t i = 1; i < values.size(); ++i) {
      const double mid = 0.5 * (values[i - 1] + values[i]);
      CHECK(sturm_count(form, mid) == i);
    }
  }

  TEST_CASE("eigenvectors are weighted-orthonormal") {
    const auto form = assemble_form(WeightedInterval{2}, 513);
    const auto pairs = tridiag_eigenpairs(form, 40, 1e-12, 2);
    const std::size_t n = pairs.size;
    double worst = 0.0;
    for (std::size_t a = 0; a < 40; ++a) {
      for (std::size_t b = a; b < 40; ++b) {
        CompensatedSum dot;
        for (std::size_t j = 0; j < n; ++j) dot += form.node_weights[j] * pairs.function(a)[j] * pairs.function(b)[j];
        worst = std::max(worst, std::fabs(dot.value() - (a == b ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-8);
    const double c = pairs.function(0)[0];
    for (std::size_t j = 0; j < n; ++j) CHECK(std::fabs(pairs.function(0)[j] - c) < 1e-8);
  }

  TEST_CASE("eigenpairs do not depend on the thread count") {
    const auto form = assemble_form(WeightedInterval{0.5}, 301);
    const auto one = tridiag_eigenpairs(form, 30, 1e-12, 1);
    const auto many = tridiag_eigenpairs(form, 30, 1e-12, 8);
    CHECK(one.values == many.values);
    CHECK(one.functions == many.functions);
  }
}

TEST_SUITE("sturm_liouville") {
  TEST_CASE("Prufer shooting reproduces k(k+p)") {
    for (double p : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      for (int k = 0; k < 10; ++k) {
        CHECK(std::fabs(prufer_eigenvalue(WeightedInterval{p}, k) - k * (k + p)) < 1e-7);
      }
    }
  }

  TEST_CASE("Frobenius exponents") {
    CHECK(frobenius_exponent({1.0, 0.0}) == 0.0);
    // phi ~ t^m over a circle mode mu = m^2 (a = 1), and t^l for mu = l(l+1) when a = 2.
    CHECK(frobenius_exponent({1.0, 9.0}) == doctest::Approx(3.0));
    CHECK(frobenius_exponent({2.0, 6.0}) == doctest::Approx(2.0));
  }

  TEST_CASE("radial counts") {
    const RadialProblem problem{1.0, 0.0};
    CHECK(radial_count(problem, 0.5) == 1);
    CHECK(radial_count(problem, 2.5) == 2);
    CHECK(radial_count(problem, 30.5) == 6);
  }

  TEST_CASE("hemisphere spectrum by suspension") {
    const Spectrum base = oracle_spectrum_up_to(WeightedInterval{0}, 50.0);
    const Spectrum s = suspension_spectrum(base, 1.0, 50.0);
    std::vector<SpectralLevel> expected;
    for (int l = 0; l * (l + 1) <= 50; ++l) expected.push_back({static_cast<double>(l * (l + 1)), l + 1});
    REQUIRE(s.entries().size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(s.entries()[i].lambda == doctest::Approx(expected[i].lambda).epsilon(1e-9));
      CHECK(s.entries()[i].multiplicity == expected[i].multiplicity);
    }
    CHECK(s.complete_up_to() == 50.0);
  }

  TEST_CASE("sphere spectrum from the circle") {
    const Spectrum base = oracle_spectrum_up_to(Circle{}, 200.0);
    SuspensionOptions options;
    options.threads = 4;
    const Spectrum s = suspension_spectrum(base, 1.0, 200.0, options);
    int l = 0;
    for (const auto& e : s.entries()) {
      CHECK(std::fabs(e.lambda - l * (l + 1)) < 1e-6);
      CHECK(e.multiplicity == 2 * l + 1);
      ++l;
    }
    CHECK(l == 14);
  }

  TEST_CASE("incomplete base") {
    const Spectrum base = oracle_spectrum(WeightedInterval{0}, 3);
    try {
      suspension_spectrum(base, 1.0, 100.0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::incomplete_base);
    }
  }

  TEST_CASE("bracketing failures") {
    try {
      radial_eigenvalue({1.0, 0.0}, 3, 0.0, 1.0, 1e-9);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::bracketing_failure);
    }
  }

  TEST_CASE("three-level tower") {
    // Base hemisphere modes l(l+1) (mult l+1) with radial weight sin t:
    // lambda_0 = 0 and the first radial excitation of mu = 0 is 2.
    const Spectrum s = tower_spectrum(SuspensionTower{3, 0.0}, 10.0);
    CHECK(s.entries()[0] == SpectralLevel{0.0, 1});
    CHECK(s.entries()[1].lambda == doctest::Approx(2.0).epsilon(1e-8));
  }
}
