#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "regmeas/linrep.hpp"

namespace regmeas {

/// Monic characteristic polynomial of a square rational matrix, exact
/// coefficients c[0] + c[1] x + ... + c[d] x^d with c[d] = 1
/// (Faddeev-LeVerrier).
std::vector<Rational> characteristic_polynomial(const RatMat& b);

/// All d roots of the characteristic polynomial via its companion matrix,
/// Newton-polished and with conjugate pairs symmetrised. Guard: d <= 12.
std::vector<std::complex<double>> eigenvalues(const RatMat& b);

/// Smallest j <= d^2 - 2d + 2 with B^j entrywise positive (Wielandt bound);
/// nullopt when no power is positive. B must be entrywise nonnegative.
std::optional<int> positivity_power(const RatMat& b);

struct PrimitivityReport {
  bool primitive = false;
  /// True when nonnegativity of the sequence is certified structurally
  /// (all digit matrices, terminal and selector nonnegative), false when it
  /// only holds for the sampled range 0..2^16.
  bool nonneg_certified = false;
  std::vector<std::string> reasons;
};

PrimitivityReport is_primitive_rep(const LinearRepresentation& rep);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  double rho = 0.0;
  bool dominant_unique = false;
  double subdominant_modulus = 0.0;
  bool primitive = false;
  std::optional<int> positivity_power;
  std::vector<std::string> notes;
};

SpectrumReport spectrum_report(const LinearRepresentation& rep);

struct JsrBounds {
  double lower = 0.0;
  double upper = 0.0;
  int depth = 0;
};

/// Norm-based joint-spectral-radius bracket over products of length <= depth.
/// Upper bound uses the maximum absolute row-sum norm; lower bound uses
/// spectral radii of explored products, skipping products whose norm already
/// caps them below the current lower bound. Work guard: k^depth <= 2^20.
JsrBounds jsr_bounds(const std::vector<RatMat>& matrices, int depth);

struct HolderBound {
  double alpha_lower = 0.0;
  double alpha_upper = 0.0;
};

/// Certified interval [log_k(rho/upper), log_k(rho/lower)] containing
/// log_k(rho/rho*); its lower end is also the certified local-dimension
/// lower bound. Throws HypothesisError when the dominant eigenvalue is not
/// unique or rho <= jsr upper bound at this depth.
HolderBound holder_bound(const LinearRepresentation& rep, int depth);

}  // namespace regmeas
