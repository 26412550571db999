#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <map>
#include <vector>

#include "regmeas/errors.hpp"
#include "regmeas/linrep.hpp"

using namespace regmeas;

namespace {

// Recurrence oracles, independent of the matrix machinery.
long stern_oracle(std::uint64_t m) {
  if (m < 2) return static_cast<long>(m);
  return m % 2 == 0 ? stern_oracle(m / 2)
                    : stern_oracle(m / 2) + stern_oracle(m / 2 + 1);
}

long josephus_oracle(std::uint64_t m) {
  if (m == 0) return 0;
  if (m == 1) return 1;
  return m % 2 == 0 ? 2 * josephus_oracle(m / 2) - 1
                    : 2 * josephus_oracle(m / 2) + 1;
}

int popcount_oracle(std::uint64_t m) {
  int c = 0;
  for (; m; m >>= 1) c += m & 1;
  return c;
}

}  // namespace

TEST_CASE("digit expansion round-trips and is LSB-first") {
  CHECK(digits(0, 2).empty());
  CHECK(digits(6, 2) == std::vector<int>{0, 1, 1});
  CHECK(digits(11, 3) == std::vector<int>{2, 0, 1});
  for (std::uint64_t m = 0; m < 200; ++m)
    for (int k : {2, 3, 5}) CHECK(digit_value(digits(m, k), k) == m);
}

TEST_CASE("builtin evaluations match their defining recurrences") {
  LinearRepresentation stern = builtin("stern");
  LinearRepresentation josephus = builtin("josephus");
  LinearRepresentation sumdigits = builtin("sumdigits");
  LinearRepresentation one = builtin("one");
  for (std::uint64_t m = 0; m < 300; ++m) {
    CHECK(evaluate(stern, m) == stern_oracle(m));
    CHECK(evaluate(josephus, m) == josephus_oracle(m));
    CHECK(evaluate(sumdigits, m) == popcount_oracle(m));
    CHECK(evaluate(one, m) == 1);
  }
}

TEST_CASE("dumas values are powers of its nontrivial digit matrix") {
  LinearRepresentation dumas = builtin("dumas");
  // value at m = e_1^T B_1^{bits(m)} e_1; the first few powers give
  // 1, 3, 0, -54.
  std::map<int, Rational> by_bits;
  for (int bits = 0; bits <= 6; ++bits)
    by_bits[bits] = dumas.digit(1).pow(bits)(0, 0);
  CHECK(by_bits[0] == 1);
  CHECK(by_bits[1] == 3);
  CHECK(by_bits[2] == 0);
  CHECK(by_bits[3] == -54);
  for (std::uint64_t m = 0; m < 64; ++m)
    CHECK(evaluate(dumas, m) == by_bits.at(popcount_oracle(m)));
  CHECK(evaluate(dumas, 7) == -54);
}

TEST_CASE("state vector recursion at nonzero indices") {
  for (const auto& name : builtin_names()) {
    LinearRepresentation rep = builtin(name);
    for (std::uint64_t m = 1; m < 64; ++m)
      for (int a = 0; a < rep.base; ++a)
        CHECK(state_vector(rep, rep.base * m + a) ==
              rep.digit(a).apply(state_vector(rep, m)));
  }
}

TEST_CASE("conjugation preserves evaluation") {
  LinearRepresentation rep = builtin("josephus");
  RatMat t(2, 2);
  t(0, 0) = 1; t(0, 1) = -1;
  t(1, 0) = 1; t(1, 1) = 1;
  LinearRepresentation conj = conjugate(rep, t);
  for (std::uint64_t m = 0; m < 200; ++m)
    CHECK(evaluate(conj, m) == evaluate(rep, m));
  RatMat b = conj.matrix_sum();
  CHECK(b(0, 0) == 3);
  CHECK(b(0, 1) == 1);
  CHECK(b(1, 0) == 1);
  CHECK(b(1, 1) == 3);
}

TEST_CASE("conjugation by a singular matrix is rejected") {
  RatMat t(2, 2);
  t(0, 0) = 1; t(0, 1) = 1;
  t(1, 0) = 2; t(1, 1) = 2;
  CHECK_THROWS_AS(conjugate(builtin("stern"), t), FormatError);
}

TEST_CASE("base lifting rereads the sequence in base k^j") {
  for (const auto& name : builtin_names()) {
    LinearRepresentation rep = builtin(name);
    for (int j : {2, 3}) {
      LinearRepresentation lifted = lift_base(rep, j);
      CHECK(lifted.base == 1 << j);  // all builtins have k = 2
      for (std::uint64_t m = 0; m < 200; ++m)
        CHECK(evaluate(lifted, m) == evaluate(rep, m));
    }
  }
}

TEST_CASE("transposition evaluates at the digit-reversed index") {
  LinearRepresentation rep = builtin("stern");
  LinearRepresentation rev = transpose_rep(rep);
  for (std::uint64_t m = 1; m < 128; ++m) {
    std::vector<int> d = digits(m, 2);
    std::vector<int> r(d.rbegin(), d.rend());
    CHECK(evaluate(rev, m) == evaluate(rep, digit_value(r, 2)));
  }
}

TEST_CASE("JSON round trip is lossless") {
  for (const auto& name : builtin_names()) {
    LinearRepresentation rep = builtin(name);
    LinearRepresentation back =
        representation_from_json(representation_to_json(rep));
    CHECK(back.base == rep.base);
    CHECK(back.dim == rep.dim);
    CHECK(back.terminal == rep.terminal);
    CHECK(back.selector == rep.selector);
    for (int a = 0; a < rep.base; ++a) CHECK(back.digit(a) == rep.digit(a));
  }
}

TEST_CASE("malformed representations are rejected") {
  CHECK_THROWS_AS(builtin("nope"), FormatError);
  CHECK_THROWS_AS(representation_from_json("{}"), FormatError);
  CHECK_THROWS_AS(representation_from_json("not json"), FormatError);
  CHECK_THROWS_AS(load_representation("/nonexistent/rep.json"), FormatError);
  // Wrong matrix count for the declared base.
  CHECK_THROWS_AS(representation_from_json(
                      R"({"k":2,"dim":1,"matrices":[[1]],"terminal":[1]})"),
                  FormatError);
}

TEST_CASE("rational parsing is exact and refuses floats") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-7") == -7);
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK_THROWS_AS(parse_rational("0.5"), FormatError);
  CHECK_THROWS_AS(parse_rational("1e3"), FormatError);
  CHECK_THROWS_AS(parse_rational("1/0"), FormatError);
  CHECK_THROWS_AS(parse_rational(""), FormatError);
  CHECK(rational_string(Rational(-3, 6)) == "-1/2");
}
