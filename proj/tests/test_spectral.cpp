#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "regmeas/errors.hpp"
#include "regmeas/spectral.hpp"

using namespace regmeas;

TEST_CASE("characteristic polynomial is exact") {
  RatMat stern_b = builtin("stern").matrix_sum();
  // ((2,1),(1,2)) has x^2 - 4x + 3.
  CHECK(characteristic_polynomial(stern_b) ==
        std::vector<Rational>{3, -4, 1});

  RatMat dumas_b = builtin("dumas").matrix_sum();
  // ((4,-3),(3,4)) has x^2 - 8x + 25.
  CHECK(characteristic_polynomial(dumas_b) ==
        std::vector<Rational>{25, -8, 1});
}

TEST_CASE("eigenvalues of the builtin matrix sums") {
  auto stern = eigenvalues(builtin("stern").matrix_sum());
  REQUIRE(stern.size() == 2);
  CHECK(stern[0] == std::complex<double>(1.0, 0.0));
  CHECK(stern[1].real() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(stern[1].imag() == 0.0);

  auto dumas = eigenvalues(builtin("dumas").matrix_sum());
  REQUIRE(dumas.size() == 2);
  CHECK(dumas[0].real() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(dumas[0].imag()) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(dumas[1] == std::conj(dumas[0]));
  CHECK(std::abs(dumas[0]) == doctest::Approx(5.0).epsilon(1e-12));

  RatMat big(13, 13);
  CHECK_THROWS_AS(eigenvalues(big), GuardError);
}

TEST_CASE("positivity power") {
  CHECK(positivity_power(builtin("stern").matrix_sum()) == 1);
  // diag(4,2) has no positive power.
  CHECK_FALSE(positivity_power(builtin("josephus").matrix_sum()).has_value());
  CHECK_THROWS_AS(positivity_power(builtin("dumas").matrix_sum()),
                  FormatError);
  // ((0,1),(1,0)) + I pattern: a 2x2 primitive matrix needs at most
  // d^2 - 2d + 2 = 2 steps.
  RatMat m(2, 2);
  m(0, 0) = 0; m(0, 1) = 1;
  m(1, 0) = 1; m(1, 1) = 1;
  CHECK(positivity_power(m) == 2);
}

TEST_CASE("primitivity certificates") {
  PrimitivityReport stern = is_primitive_rep(builtin("stern"));
  CHECK(stern.primitive);
  CHECK(stern.nonneg_certified);

  PrimitivityReport josephus = is_primitive_rep(builtin("josephus"));
  CHECK_FALSE(josephus.primitive);
  bool negative_digit = false;
  for (const auto& r : josephus.reasons)
    if (r.find("B_0 has a negative entry") != std::string::npos)
      negative_digit = true;
  CHECK(negative_digit);

  PrimitivityReport dumas = is_primitive_rep(builtin("dumas"));
  CHECK_FALSE(dumas.primitive);
}

TEST_CASE("spectrum report flags the complex-pair case") {
  SpectrumReport dumas = spectrum_report(builtin("dumas"));
  CHECK_FALSE(dumas.dominant_unique);
  CHECK(dumas.rho == doctest::Approx(5.0).epsilon(1e-12));

  SpectrumReport stern = spectrum_report(builtin("stern"));
  CHECK(stern.dominant_unique);
  CHECK(stern.primitive);
  CHECK(stern.positivity_power == 1);
  CHECK(stern.subdominant_modulus == doctest::Approx(1.0).epsilon(1e-9));

  SpectrumReport josephus = spectrum_report(builtin("josephus"));
  CHECK(josephus.dominant_unique);
  CHECK_FALSE(josephus.primitive);
}

TEST_CASE("singleton families collapse the jsr bracket to the spectral "
          "radius for non-defective matrices") {
  for (const auto& name : {"stern", "josephus", "one"}) {
    LinearRepresentation rep = builtin(name);
    JsrBounds b = jsr_bounds({rep.matrix_sum()}, 12);
    double rho = 0.0;
    for (const auto& z : eigenvalues(rep.matrix_sum()))
      rho = std::max(rho, std::abs(z));
    CHECK(b.lower == doctest::Approx(rho).epsilon(1e-6));
    CHECK(b.upper == doctest::Approx(rho).epsilon(1e-6));
    CHECK(b.lower <= b.upper + 1e-12);
  }
}

TEST_CASE("jsr bracket for the Stern pair") {
  JsrBounds b = jsr_bounds(builtin("stern").digit_matrices, 12);
  const double tau = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(b.lower >= tau - 1e-9);
  CHECK(b.lower <= b.upper);
  CHECK(b.upper <= 1.67);
}

TEST_CASE("jsr guards") {
  CHECK_THROWS_AS(jsr_bounds(builtin("stern").digit_matrices, 25),
                  GuardError);
  CHECK_THROWS_AS(jsr_bounds({}, 4), FormatError);
  CHECK_THROWS_AS(jsr_bounds(builtin("stern").digit_matrices, 0),
                  FormatError);
}

TEST_CASE("Holder interval for the Stern pair") {
  HolderBound h = holder_bound(builtin("stern"), 12);
  // log_2(3/tau) with tau the golden ratio.
  const double target = std::log2(3.0 / ((1.0 + std::sqrt(5.0)) / 2.0));
  CHECK(h.alpha_lower <= target + 1e-9);
  CHECK(h.alpha_upper >= target - 1e-9);
  CHECK(h.alpha_upper - h.alpha_lower <= 0.06);
}

TEST_CASE("Holder bound requires a unique dominant eigenvalue") {
  CHECK_THROWS_AS(holder_bound(builtin("dumas"), 8), HypothesisError);
}
