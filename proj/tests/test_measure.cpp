#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "regmeas/errors.hpp"
#include "regmeas/measure.hpp"
#include "regmeas/sums.hpp"

using namespace regmeas;

namespace {

Integer pow_int(int base, int exp) {
  Integer v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

/// Direct enumeration oracle for interval masses, selector-weighted.
Rational brute_mass(const LinearRepresentation& rep, int n, const Rational& a,
                    const Rational& b) {
  Rational grid(pow_int(rep.base, n) * (rep.base - 1));
  Rational total = 0, inside = 0;
  Integer lo = pow_int(rep.base, n);
  Integer hi = lo * rep.base;
  for (Integer m = lo; m < hi; ++m) {
    Rational value = dot(rep.selector, state_vector(rep, m.get_ui()));
    total += value;
    Rational point = Rational(m - lo) / grid;
    if (point >= a && point < b) inside += value;
  }
  return inside / total;
}

}  // namespace

TEST_CASE("approximant weights are normalised probabilities per component") {
  for (const auto& name : {"stern", "josephus", "one"}) {
    LinearRepresentation rep = builtin(name);
    for (int n = 0; n <= 6; ++n) {
      MeasureVector mv = approximant(rep, n);
      for (const auto& mu : mv.components) {
        Rational total = 0;
        for (const auto& w : mu.weights) total += w;
        CHECK(total == 1);
      }
      CHECK(mv.components.front().point(0) == 0);
    }
  }
}

TEST_CASE("support points live on the k-adic grid of the torus") {
  MeasureVector mv = approximant(builtin("stern"), 3);
  // Level 3, base 2: points m / (8 * 1).
  CHECK(mv.components.front().point(5) == Rational(5, 8));
  CHECK(mv.components.front().weights.size() == 8);
}

TEST_CASE("refinement step reproduces the next approximant exactly") {
  for (const auto& name : {"stern", "josephus"}) {
    LinearRepresentation rep = builtin(name);
    MeasureVector current = approximant(rep, 0);
    for (int n = 1; n <= 6; ++n) {
      current = refine_step(rep, current);
      MeasureVector direct = approximant(rep, n);
      REQUIRE(current.level() == n);
      for (int i = 0; i < rep.dim; ++i)
        CHECK(current.components[i].weights == direct.components[i].weights);
    }
  }
}

TEST_CASE("cocycle at z = 1 is exactly Markov") {
  LinearRepresentation rep = builtin("stern");
  for (int n = 1; n <= 12; ++n) {
    RatMat a = evaluate_at(cocycle_matrix(rep, n), Rational(1));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Rational row = 0;
      for (std::size_t j = 0; j < a.cols(); ++j) row += a(i, j);
      CHECK(row == 1);
    }
  }
}

TEST_CASE("complex cocycle evaluation matches the exact one on the reals") {
  CocycleMatrix a = cocycle_matrix(builtin("stern"), 3);
  RatMat exact = evaluate_at(a, Rational(1, 2));
  auto approx = evaluate_at(a, std::complex<double>(0.5, 0.0));
  for (std::size_t i = 0; i < exact.rows(); ++i)
    for (std::size_t j = 0; j < exact.cols(); ++j) {
      CHECK(approx[i * exact.cols() + j].real() ==
            doctest::Approx(to_double(exact(i, j))).epsilon(1e-12));
      CHECK(approx[i * exact.cols() + j].imag() == 0.0);
    }
}

TEST_CASE("empirical distribution function endpoints") {
  LinearRepresentation rep = builtin("stern");
  Vec at_one = empirical_cdf(rep, 6, Rational(1));
  for (const auto& v : at_one) CHECK(v == 1);
  Vec at_zero_open = empirical_cdf(rep, 6, Rational(0), /*closed=*/false);
  for (const auto& v : at_zero_open) CHECK(v == 0);
}

TEST_CASE("empirical distribution of the constant sequence is uniform") {
  LinearRepresentation rep = builtin("one");
  for (int j = 0; j <= 16; ++j) {
    Rational x(j, 16);
    // Closed intervals pick up one extra atom of mass 2^-n, except at the
    // right endpoint where the support has already been exhausted.
    Rational expected = j < 16 ? x + Rational(1, 1 << 10) : Rational(1);
    CHECK(empirical_cdf(rep, 10, x)[0] == expected);
  }
}

TEST_CASE("scan masses match direct enumeration") {
  for (const auto& name : {"stern", "dumas", "josephus"}) {
    LinearRepresentation rep = builtin(name);
    for (const auto& interval :
         {std::pair<Rational, Rational>{Rational(0), Rational(1, 2)},
          {Rational(1, 4), Rational(3, 4)},
          {Rational(1, 8), Rational(1)},
          {Rational(3, 8), Rational(7, 16)}}) {
      ScanSeries series =
          scan_interval(rep, interval.first, interval.second, 9);
      for (const auto& entry : series.entries) {
        CHECK_FALSE(entry.sigma_vanishes);
        CHECK(entry.mass ==
              brute_mass(rep, entry.level, interval.first, interval.second));
      }
    }
  }
}

TEST_CASE("scan pins the divergent example's first levels") {
  ScanSeries series =
      scan_interval(builtin("dumas"), Rational(0), Rational(1, 2), 2);
  REQUIRE(series.entries.size() == 2);
  CHECK(series.entries[0].mass == 1);
  CHECK(series.entries[1].mass == Rational(-1, 17));
}

TEST_CASE("scan rejects non-adic endpoints and bad intervals") {
  LinearRepresentation rep = builtin("stern");
  CHECK_THROWS_AS(scan_interval(rep, Rational(0), Rational(1, 5), 4),
                  FormatError);
  CHECK_THROWS_AS(scan_interval(rep, Rational(1, 2), Rational(1, 4), 4),
                  FormatError);
  CHECK_THROWS_AS(scan_interval(rep, Rational(-1, 2), Rational(1, 4), 4),
                  FormatError);
}

TEST_CASE("Fourier transform of an approximant at frequency 0 is 1") {
  MeasureVector mv = approximant(builtin("stern"), 8);
  for (const auto& mu : mv.components) {
    std::complex<double> c = fourier_empirical(mu, 0.0);
    CHECK(c.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(c.imag()) < 1e-12);
  }
}

TEST_CASE("Fourier product recursion peels one cocycle factor") {
  // mu_n-hat(t) = A_n(e^{-2 pi i t / (k^n (k-1))}) mu_{n-1}-hat(t), checked
  // against direct transforms of the approximants.
  LinearRepresentation rep = builtin("stern");
  for (int t = 1; t <= 8; ++t) {
    for (int n = 1; n <= 10; ++n) {
      MeasureVector prev = approximant(rep, n - 1);
      MeasureVector cur = approximant(rep, n);
      CocycleMatrix a = cocycle_matrix(rep, n);
      double angle = -2.0 * M_PI * t / (std::pow(2.0, n) * 1.0);
      auto an = evaluate_at(a, std::polar(1.0, angle));
      for (int i = 0; i < rep.dim; ++i) {
        std::complex<double> lhs = fourier_empirical(cur.components[i], t);
        std::complex<double> rhs = 0.0;
        for (int j = 0; j < rep.dim; ++j)
          rhs += an[i * rep.dim + j] *
                 fourier_empirical(prev.components[j], t);
        CHECK(std::abs(lhs - rhs) < 1e-10);
      }
    }
  }
}

TEST_CASE("uniqueness check stabilises for the Stern pair") {
  UniquenessReport report = uniqueness_check(builtin("stern"), {1, 2, 3}, 30);
  CHECK(report.pass);
  CHECK_FALSE(report.advisory);
  for (const auto& entry : report.entries) {
    CHECK(entry.max_pairwise < 1e-5);
    CHECK(entry.last_delta < 1e-5);
  }
}

TEST_CASE("uniqueness check is advisory for the divergent example") {
  UniquenessReport report = uniqueness_check(builtin("dumas"), {1}, 20);
  CHECK(report.advisory);
}

TEST_CASE("total variation of monotone samples telescopes") {
  CHECK(total_variation_estimate({{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}}) ==
        doctest::Approx(1.0));
  CHECK(total_variation_estimate({{0.0, 0.0}, {0.5, 2.0}, {1.0, 1.0}}) ==
        doctest::Approx(3.0));
  CHECK_THROWS_AS(total_variation_estimate({{0.5, 0.0}, {0.5, 1.0}}),
                  FormatError);
}
