#pragma once

#include <stdexcept>
#include <string>

namespace regmeas {

/// Base class for all regmeas errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size or work guard was exceeded (e.g. brute-force range too large).
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: representation files, rational literals, option values.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis fails or cannot be certified (non-unique dominant
/// eigenvalue, rho <= jsr upper bound, degenerate normalisation, vanishing
/// non-degeneracy bracket).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// An iteration failed to converge within its cap.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace regmeas
