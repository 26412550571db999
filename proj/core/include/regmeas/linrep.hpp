#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regmeas/ratmat.hpp"

namespace regmeas {

/// Linear representation of a k-regular sequence: base k, digit matrices
/// B_0..B_{k-1}, terminal vector w and a selector row. The sequence value at
/// m is selector * B_{i_0} B_{i_1} ... B_{i_s} * w, where i_0 i_1 ... i_s is
/// the base-k expansion of m, least-significant digit first; the expansion of
/// 0 is the empty word, so the value at 0 is selector * w.
struct LinearRepresentation {
  int base = 2;
  int dim = 1;
  std::vector<RatMat> digit_matrices;
  Vec terminal;
  Vec selector;
  std::string name;

  /// Throws FormatError when shapes are inconsistent.
  void validate() const;

  const RatMat& digit(int a) const { return digit_matrices[a]; }

  /// B = B_0 + ... + B_{k-1}.
  RatMat matrix_sum() const;
};

/// Base-k digits, least-significant first. The expansion of 0 is empty.
std::vector<int> digits(std::uint64_t m, int base);

/// Inverse of digits().
std::uint64_t digit_value(const std::vector<int>& digits_lsb_first, int base);

Rational evaluate(const LinearRepresentation& rep, std::uint64_t m);

Vec state_vector(const LinearRepresentation& rep, std::uint64_t m);

/// Basis change: matrices T B_a T^{-1}, terminal T w, selector selector T^{-1}.
/// Evaluation is unchanged. Throws FormatError when T is singular.
LinearRepresentation conjugate(const LinearRepresentation& rep, const RatMat& t);

/// Reads f as a k^j-regular sequence; the digit matrix for a with base-k
/// digits a_0..a_{j-1} (least significant first) is B_{a_0} ... B_{a_{j-1}}.
LinearRepresentation lift_base(const LinearRepresentation& rep, int j);

/// Transposes every digit matrix and swaps terminal and selector. Evaluation
/// of the result at m equals the original evaluation at the digit-reversed
/// integer.
LinearRepresentation transpose_rep(const LinearRepresentation& rep);

/// Built-in examples: stern, josephus, dumas, sumdigits, one.
LinearRepresentation builtin(const std::string& name);
const std::vector<std::string>& builtin_names();

/// JSON serialisation. Entries are integers or "p/q" strings.
LinearRepresentation representation_from_json(const std::string& json_text);
std::string representation_to_json(const LinearRepresentation& rep);
LinearRepresentation load_representation(const std::string& path);
void save_representation(const LinearRepresentation& rep, const std::string& path);

}  // namespace regmeas
