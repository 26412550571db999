#include "regmeas/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "regmeas/errors.hpp"
#include "regmeas/sums.hpp"

namespace regmeas {

namespace {

Eigen::MatrixXd to_eigen(const RatMat& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

double inf_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Exact univariate polynomial arithmetic, coefficients ascending.
using Poly = std::vector<Rational>;

void poly_trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

Poly poly_derivative(const Poly& p) {
  Poly d(std::max<std::size_t>(p.size() - 1, 1), Rational(0));
  for (std::size_t i = 1; i < p.size(); ++i)
    d[i - 1] = p[i] * Rational(static_cast<long>(i));
  poly_trim(d);
  return d;
}

void poly_make_monic(Poly& p) {
  poly_trim(p);
  Rational lead = p.back();
  if (lead == 0 || lead == 1) return;
  for (auto& c : p) c /= lead;
}

/// Remainder of a by b (b nonzero).
Poly poly_mod(Poly a, const Poly& b) {
  poly_trim(a);
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
    Rational factor = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] -= factor * b[i];
    a.pop_back();
    poly_trim(a);
  }
  if (a.empty()) a.assign(1, Rational(0));
  return a;
}

/// Exact quotient a / b when b divides a.
Poly poly_div(Poly a, const Poly& b) {
  poly_trim(a);
  if (a.size() < b.size()) return {Rational(0)};
  Poly q(a.size() - b.size() + 1, Rational(0));
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
    Rational factor = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] -= factor * b[i];
    a.pop_back();
    poly_trim(a);
  }
  poly_trim(q);
  return q;
}

Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!(b.size() == 1 && b[0] == 0)) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  poly_make_monic(a);
  return a;
}

bool poly_is_one(const Poly& p) { return p.size() == 1 && p[0] == 1; }

std::complex<double> poly_eval(const Poly& p, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + to_double(p[i]);
  return acc;
}

}  // namespace

std::vector<Rational> characteristic_polynomial(const RatMat& b) {
  const std::size_t d = b.rows();
  std::vector<Rational> c(d + 1);
  c[d] = 1;
  RatMat m = RatMat(d, d);  // M_0 = 0, the loop starts from M_1 = B.
  RatMat eye = RatMat::identity(d);
  for (std::size_t k = 1; k <= d; ++k) {
    m = b * (m + eye * c[d - k + 1]);
    c[d - k] = -m.trace() / Rational(static_cast<long>(k));
  }
  return c;
}

std::vector<std::complex<double>> eigenvalues(const RatMat& b) {
  const std::size_t d = b.rows();
  if (d > 12) throw GuardError("eigenvalue computation limited to d <= 12");
  Poly poly = characteristic_polynomial(b);

  // Exact squarefree chain: a root of multiplicity m in p vanishes in the
  // first m entries. Repeated roots are then located once, on the squarefree
  // part where Newton converges quadratically, instead of being smeared out
  // by the companion solver.
  std::vector<Poly> chain{poly};
  while (chain.back().size() > 1) {
    Poly g = poly_gcd(chain.back(), poly_derivative(chain.back()));
    if (poly_is_one(g)) break;
    chain.push_back(std::move(g));
  }
  Poly sqfree = chain.size() > 1 ? poly_div(poly, chain[1]) : poly;
  const std::size_t deg = sqfree.size() - 1;

  // Companion matrix of the monic squarefree part.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i)
    companion(i, deg - 1) = -to_double(sqfree[i]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);

  Poly sqfree_deriv = poly_derivative(sqfree);
  std::vector<std::complex<double>> distinct(deg);
  for (std::size_t i = 0; i < deg; ++i) {
    std::complex<double> z = solver.eigenvalues()(i);
    for (int it = 0; it < 12; ++it) {
      std::complex<double> deriv = poly_eval(sqfree_deriv, z);
      if (std::abs(deriv) < 1e-300) break;
      std::complex<double> step = poly_eval(sqfree, z) / deriv;
      z -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    distinct[i] = z;
  }

  std::vector<std::complex<double>> roots;
  for (const auto& z : distinct) {
    std::size_t mult = 1;
    for (std::size_t j = 1; j < chain.size(); ++j) {
      double scale = 0.0;
      double zpow = 1.0;
      for (const auto& c : chain[j]) {
        scale += std::abs(to_double(c)) * zpow;
        zpow *= std::max(1.0, std::abs(z));
      }
      if (std::abs(poly_eval(chain[j], z)) <= 1e-8 * (1.0 + scale))
        ++mult;
      else
        break;
    }
    roots.insert(roots.end(), mult, z);
  }
  if (roots.size() != d)
    throw NumericalError("eigenvalue multiplicities did not sum to the "
                         "matrix dimension");

  double scale = 0.0;
  for (const auto& z : roots) scale = std::max(scale, std::abs(z));
  const double tol = 1e-9 * (1.0 + scale);

  for (auto& z : roots)
    if (std::abs(z.imag()) <= tol) z = std::complex<double>(z.real(), 0.0);

  // Pair complex roots with their conjugates and symmetrise.
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<bool> paired(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    if (paired[i] || roots[i].imag() == 0.0) continue;
    std::size_t best = d;
    double best_dist = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < d; ++j) {
      if (j == i || paired[j] || roots[j].imag() == 0.0) continue;
      if (roots[i].imag() * roots[j].imag() >= 0) continue;
      double dist = std::abs(roots[j] - std::conj(roots[i]));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best < d) {
      double re = 0.5 * (roots[i].real() + roots[best].real());
      double im = 0.5 * (std::abs(roots[i].imag()) + std::abs(roots[best].imag()));
      roots[i] = {re, roots[i].imag() > 0 ? im : -im};
      roots[best] = std::conj(roots[i]);
      paired[i] = paired[best] = true;
    }
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

std::optional<int> positivity_power(const RatMat& b) {
  if (!b.is_nonnegative())
    throw FormatError("positivity_power requires a nonnegative matrix");
  const long d = static_cast<long>(b.rows());
  const long wielandt = d * d - 2 * d + 2;
  RatMat power = b;
  for (long j = 1; j <= std::max<long>(wielandt, 1); ++j) {
    if (power.is_positive()) return static_cast<int>(j);
    power = power * b;
  }
  return std::nullopt;
}

PrimitivityReport is_primitive_rep(const LinearRepresentation& rep) {
  PrimitivityReport report;
  report.primitive = true;
  report.nonneg_certified = true;

  auto vec_nonneg = [](const Vec& v) {
    for (const auto& x : v)
      if (x < 0) return false;
    return true;
  };

  for (int a = 0; a < rep.base; ++a) {
    if (!rep.digit(a).is_nonnegative()) {
      report.reasons.push_back("digit matrix B_" + std::to_string(a) +
                               " has a negative entry");
      report.nonneg_certified = false;
      report.primitive = false;
    }
  }
  if (!vec_nonneg(rep.terminal)) {
    report.reasons.push_back("terminal vector has a negative entry");
    report.nonneg_certified = false;
  }
  if (!vec_nonneg(rep.selector)) {
    report.reasons.push_back("selector has a negative entry");
    report.nonneg_certified = false;
  }
  if (!report.nonneg_certified) {
    // Structural certificate failed; fall back to sampling the sequence.
    bool sampled_ok = true;
    for (std::uint64_t m = 0; m <= (1ULL << 16); ++m) {
      if (evaluate(rep, m) < 0) {
        sampled_ok = false;
        report.reasons.push_back("sequence value at m=" + std::to_string(m) +
                                 " is negative");
        break;
      }
    }
    if (sampled_ok)
      report.reasons.push_back(
          "nonnegativity sampled on 0..2^16, not certified");
    else
      report.primitive = false;
  }

  RatMat b = rep.matrix_sum();
  if (!b.is_positive()) {
    report.reasons.push_back("B = sum of digit matrices is not positive");
    report.primitive = false;
  }

  bool some_nonzero = false;
  for (int n = 0; n <= rep.dim && !some_nonzero; ++n) {
    Vec sigma = sigma_vector(rep, n).values;
    for (const auto& x : sigma)
      if (x != 0) some_nonzero = true;
  }
  if (!some_nonzero) {
    report.reasons.push_back("sequence is eventually zero (all Sigma(n) vanish)");
    report.primitive = false;
  }
  return report;
}

SpectrumReport spectrum_report(const LinearRepresentation& rep) {
  SpectrumReport report;
  RatMat b = rep.matrix_sum();
  report.eigenvalues = eigenvalues(b);
  for (const auto& z : report.eigenvalues)
    report.rho = std::max(report.rho, std::abs(z));

  // Cluster roots into distinct spectrum points.
  const double tol = 1e-7 * (1.0 + report.rho);
  std::vector<std::complex<double>> points;
  for (const auto& z : report.eigenvalues) {
    bool found = false;
    for (const auto& p : points)
      if (std::abs(p - z) <= tol) found = true;
    if (!found) points.push_back(z);
  }
  int dominant_points = 0;
  for (const auto& p : points) {
    double m = std::abs(p);
    if (m >= report.rho - tol)
      ++dominant_points;
    else
      report.subdominant_modulus = std::max(report.subdominant_modulus, m);
  }
  report.dominant_unique = dominant_points == 1;
  if (!report.dominant_unique)
    report.notes.push_back("non-unique dominant eigenvalue");

  PrimitivityReport prim = is_primitive_rep(rep);
  report.primitive = prim.primitive;
  for (auto& r : prim.reasons) report.notes.push_back(std::move(r));

  if (b.is_nonnegative())
    report.positivity_power = positivity_power(b);
  else
    report.notes.push_back("B has a negative entry; positivity power skipped");
  return report;
}

namespace {

struct JsrSearch {
  std::vector<Eigen::MatrixXd> family;
  int depth;
  double lower = 0.0;
  std::vector<double> max_norm;  // per length, 1-based

  void visit(const Eigen::MatrixXd& product, int length) {
    double norm = inf_norm(product);
    max_norm[length] = std::max(max_norm[length], norm);
    // A product whose norm already caps its averaged growth below the
    // current lower bound cannot improve it.
    double norm_rate = std::pow(norm, 1.0 / length);
    if (norm_rate > lower)
      lower = std::max(lower, std::pow(spectral_radius(product), 1.0 / length));
    if (length < depth)
      for (const auto& m : family) visit(product * m, length + 1);
  }
};

}  // namespace

JsrBounds jsr_bounds(const std::vector<RatMat>& matrices, int depth) {
  if (depth < 1) throw FormatError("jsr depth must be >= 1");
  if (matrices.empty()) throw FormatError("jsr needs at least one matrix");
  const double k = static_cast<double>(matrices.size());
  if (k > 1.0 && depth * std::log2(k) > 20.0)
    throw GuardError("jsr product enumeration exceeds 2^20");

  JsrSearch search;
  for (const auto& m : matrices) search.family.push_back(to_eigen(m));
  search.depth = depth;
  search.max_norm.assign(depth + 1, 0.0);
  for (const auto& m : search.family) search.visit(m, 1);

  JsrBounds bounds;
  bounds.depth = depth;
  bounds.lower = search.lower;
  bounds.upper = std::numeric_limits<double>::max();
  for (int n = 1; n <= depth; ++n)
    bounds.upper = std::min(bounds.upper, std::pow(search.max_norm[n], 1.0 / n));
  return bounds;
}

HolderBound holder_bound(const LinearRepresentation& rep, int depth) {
  SpectrumReport spectrum = spectrum_report(rep);
  if (!spectrum.dominant_unique)
    throw HypothesisError("non-unique dominant eigenvalue");
  JsrBounds jsr = jsr_bounds(rep.digit_matrices, depth);
  if (spectrum.rho <= jsr.upper)
    throw HypothesisError(
        "rho <= joint-spectral-radius upper bound; rho > rho* cannot be "
        "certified at this depth");
  const double logk = std::log(static_cast<double>(rep.base));
  HolderBound bound;
  bound.alpha_lower = std::log(spectrum.rho / jsr.upper) / logk;
  bound.alpha_upper = jsr.lower > 0.0
                          ? std::log(spectrum.rho / jsr.lower) / logk
                          : std::numeric_limits<double>::infinity();
  return bound;
}

}  // namespace regmeas
