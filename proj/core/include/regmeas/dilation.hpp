#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regmeas/linrep.hpp"

namespace regmeas {

/// Jordan data of the dominant eigenvalue of B' = sum of digit matrices:
/// rho real, block size v, d x v generalized-eigenvector matrix V (column c
/// is annihilated by (B' - rho I)^c), and the coordinate vector M of the
/// terminal vector's component in the dominant generalized eigenspace
/// (V M = that component). J = rho I_v + Z with Z the superdiagonal shift.
///
/// The dilation routines in this header expect the TRANSPOSED representation
/// (transpose_rep of the one used elsewhere); applied untransposed they
/// produce a different, generally wrong, distribution function.
struct JordanData {
  double rho = 0.0;
  int v = 1;
  std::vector<double> V;  // d x v, row-major
  std::vector<double> M;  // length v
  double r_gap = 0.0;
};

/// Sampled dilation-equation solution F on the k-adic grid j/k^depth,
/// j = 0..k^depth, each value a d x v matrix. F(0) = 0 and F(1) = V; the
/// out-of-range convention is F = 0 below 0 and F = V above 1.
struct GridFunction {
  int depth = 0;
  int base = 2;
  int d = 0;
  int v = 1;
  std::vector<std::vector<double>> values;  // each d*v row-major
  double contraction = 0.0;  // jsr upper bound / rho
  double residual = 0.0;
  int iterations = 0;

  /// F at x, clamped outside [0,1], linearly interpolated between grid
  /// points.
  std::vector<double> eval(double x) const;
};

/// Dominant-block Jordan data of the matrix sum. Block size 1 uses power
/// iteration from the all-ones vector, V normalised so its largest-modulus
/// entry is 1, M = (u . terminal)/(u . V) with u the dominant left
/// eigenvector. Block size >= 2 requires a rational dominant eigenvalue and
/// is computed exactly. Throws HypothesisError when the dominant eigenvalue
/// is not unique, not real, or the defective case is irrational (Jordan data
/// may then be supplied explicitly, see jordan_data_from_json).
JordanData jordan_data(const LinearRepresentation& rep);

/// Parses {"rho": ..., "v": ..., "V": [[row], ...], "M": [...]} as a manual
/// override of jordan_data.
JordanData jordan_data_from_json(const std::string& json_text);

/// Solves F(x) J = sum_a B_a F(kx - a) on the k-adic grid by fixed-point
/// iteration F <- (sum_a B_a F(kx - a)) J^{-1} from the linear interpolant
/// of the boundary values. Requires rho to exceed a certified joint-spectral-
/// radius upper bound of the digit matrices (HypothesisError otherwise) and
/// depth >= 4. Throws NumericalError when the sup-norm update fails to reach
/// tol within the iteration cap.
GridFunction solve_dilation(const LinearRepresentation& rep,
                            const JordanData& jordan, int depth,
                            double tol = 1e-10);

/// Largest j in {0,..,v-1} with L (V - F(1/k)) Z^j M nonvanishing, where L
/// is the representation's selector row; nullopt when every bracket
/// vanishes (degenerate representation).
std::optional<int> nonvanishing_index(const LinearRepresentation& rep,
                                      const JordanData& jordan,
                                      const GridFunction& grid);

/// Limit distribution function
///   [L (F((1+(k-1)x)/k) - F(1/k)) Z^ell M] / [L (V - F(1/k)) Z^ell M]
/// for x in [0,1]. Throws HypothesisError when the denominator vanishes.
double closed_form_cdf(const LinearRepresentation& rep,
                       const JordanData& jordan, const GridFunction& grid,
                       int ell, double x);

/// Main term of the partial-sum asymptotics at real x >= 1:
/// L E(log_k x) M with E(y) = C + (-C + F(k^{{y}-1})) rho^{floor(y)+1}
/// P(floor(y)), C = (I - B_0) V (I_v - J)^{-1}, P(n) = (I + Z/rho)^n.
/// Requires rho != 1.
double dumas_partial_sum(const LinearRepresentation& rep,
                         const JordanData& jordan, const GridFunction& grid,
                         double x);

}  // namespace regmeas
