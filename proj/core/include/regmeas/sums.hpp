#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regmeas/linrep.hpp"

namespace regmeas {

/// Exact vector of fundamental-region sums Sigma_i(n) over [k^n, k^{n+1}).
/// Level 0 sums over m in [1, k): the expansion of a positive integer cannot
/// begin with a zero digit.
struct SigmaVector {
  int level = 0;
  Vec values;
};

/// Seed Sigma(0) = sum_{a=1}^{k-1} B_a w.
Vec sigma_seed(const LinearRepresentation& rep);

/// Sigma(n) = B^n Sigma(0), computed by n exact matrix-vector products.
SigmaVector sigma_vector(const LinearRepresentation& rep, int n);

/// Independent oracle: direct summation of state vectors over [k^n, k^{n+1}).
/// Guard: k^{n+1} <= 2^24.
SigmaVector brute_sigma(const LinearRepresentation& rep, int n);

/// Exact sum of evaluate(rep, m) for m = 0..x. Guard: x <= 2^24.
Rational partial_sum(const LinearRepresentation& rep, std::uint64_t x);

struct GrowthReport {
  double rho_hat = 0.0;
  int ell_hat = 0;
  bool converged = false;
  std::optional<int> vanishing_level;
  /// Row-major d x d table of Sigma_j(n-1)/Sigma_i(n) at the deepest level.
  std::vector<double> quotients;
  /// Per-component estimates c_i with Sigma_i(n) ~ c_i rho^n n^ell.
  std::vector<double> c_estimates;
};

/// Ratio-based growth diagnostics from Sigma_1(n) for n <= n_max (n_max >= 4).
/// Absolute values are used so that complex-dominated spectra surface as
/// non-convergent instead of producing spurious limits.
GrowthReport sigma_growth(const LinearRepresentation& rep, int n_max);

}  // namespace regmeas
