#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "regmeas/linrep.hpp"

namespace regmeas {

/// Level-n pure point approximant on the 1-torus: exact rational weight at
/// support point m / (k^n (k-1)) for m = 0 .. k^{n+1} - k^n - 1.
struct PurePointMeasure {
  int level = 0;
  int base = 2;
  std::vector<Rational> weights;

  Rational point(std::size_t m) const;
};

struct MeasureVector {
  std::vector<PurePointMeasure> components;

  int level() const { return components.front().level; }
};

/// Exact approximant vector mu_n; weights f_i(k^n + m) / Sigma_i(n).
/// Throws HypothesisError when some Sigma_i(n) vanishes; guard k^{n+1} <= 2^24.
MeasureVector approximant(const LinearRepresentation& rep, int n);

/// Normalised cocycle matrix A_n(z) with entries
/// Sigma_j(n-1) b_ij(z) / Sigma_i(n), where b_ij(z) = sum_a (B_a)_ij z^a.
struct CocycleMatrix {
  int level = 0;
  Vec sigma_prev;
  Vec sigma_cur;
  std::vector<RatMat> digit_matrices;
};

CocycleMatrix cocycle_matrix(const LinearRepresentation& rep, int n);

/// Exact evaluation at a rational z; at z = 1 every row sums to exactly 1.
RatMat evaluate_at(const CocycleMatrix& a, const Rational& z);

/// Complex evaluation (row-major d x d).
std::vector<std::complex<double>> evaluate_at(const CocycleMatrix& a,
                                              std::complex<double> z);

/// One exact refinement step: mu_n = A_n(delta) mu_{n-1} via the convolution
/// action, weight at support index k*l + a of component i accumulating
/// (B_a)_ij Sigma_j(n-1)/Sigma_i(n) times the level-(n-1) weight at l.
MeasureVector refine_step(const LinearRepresentation& rep,
                          const MeasureVector& previous);

/// Exact per-component mass of [0, x] (closed=true) or [0, x) at level n.
Vec empirical_cdf(const LinearRepresentation& rep, int n, const Rational& x,
                  bool closed = true);

/// sum_m weight(m) exp(-2 pi i t point(m)), accumulated in ascending support
/// order.
std::complex<double> fourier_empirical(const PurePointMeasure& mu, double t);

struct FourierProduct {
  std::vector<std::complex<double>> coefficients;
  /// Sup-norm difference between the truncations at N and N-1; reported in
  /// place of a rigorous tail bound.
  double last_delta = 0.0;
};

/// Truncated limit Fourier coefficients: the product of cocycle matrices
/// A_n(e^{-2 pi i t / k^n(k-1)}) for n = N .. 1 applied to the level-0
/// coefficient vector.
FourierProduct fourier_product(const LinearRepresentation& rep, double t, int N);

struct UniquenessReport {
  struct Entry {
    double t = 0.0;
    double max_pairwise = 0.0;
    double last_delta = 0.0;
  };
  std::vector<Entry> entries;
  bool pass = false;
  /// True when the representation is not primitive, so convergence is not
  /// guaranteed and the report is advisory only.
  bool advisory = false;
};

UniquenessReport uniqueness_check(const LinearRepresentation& rep,
                                  const std::vector<double>& t_values, int N);

struct ScanEntry {
  int level = 0;
  bool sigma_vanishes = false;
  Rational mass;
};

struct ScanSeries {
  std::vector<ScanEntry> entries;
};

/// Exact series mu_{f,n}([a, b)) for n = 1..n_max, computed through the
/// block decomposition of k-adic intervals into digit-matrix products (cost
/// polynomial in n; no term enumeration). Endpoints must be k-adic: a
/// denominator dividing k^q (k-1) for some q. Levels with vanishing
/// Sigma_1(n) are reported, not fatal.
ScanSeries scan_interval(const LinearRepresentation& rep, const Rational& a,
                         const Rational& b, int n_max);

/// Total variation of a sampled function: sum |F(x_{j+1}) - F(x_j)| over an
/// increasing grid.
double total_variation_estimate(
    const std::vector<std::pair<double, double>>& samples);

}  // namespace regmeas
