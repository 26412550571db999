#pragma once

#include <gmpxx.h>

#include <string>

namespace regmeas {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p" or "p/q" (base 10). Floating-point literals are rejected;
/// exactness is load-bearing for interval endpoints and conjugation matrices.
Rational parse_rational(const std::string& text);

/// Canonical textual form, "p" or "p/q".
std::string rational_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace regmeas
