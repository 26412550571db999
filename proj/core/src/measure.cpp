#include "regmeas/measure.hpp"

#include <cmath>
#include <numbers>

#include "regmeas/errors.hpp"
#include "regmeas/spectral.hpp"
#include "regmeas/sums.hpp"

namespace regmeas {

namespace {

constexpr std::uint64_t kEnumerationGuard = 1ULL << 24;

std::uint64_t region_size(int base, int n) {
  std::uint64_t hi = 1;
  for (int i = 0; i <= n; ++i) {
    hi *= static_cast<std::uint64_t>(base);
    if (hi > kEnumerationGuard)
      throw GuardError("fundamental region exceeds the 2^24 enumeration guard");
  }
  return hi - hi / static_cast<std::uint64_t>(base);
}

/// State vectors over the fundamental region [k^n, k^{n+1}), built level by
/// level through the defining recursion.
std::vector<Vec> fundamental_states(const LinearRepresentation& rep, int n) {
  region_size(rep.base, n);  // guard
  std::vector<Vec> states;
  for (int a = 1; a < rep.base; ++a)
    states.push_back(rep.digit(a).apply(rep.terminal));
  for (int level = 1; level <= n; ++level) {
    std::vector<Vec> next(states.size() * static_cast<std::size_t>(rep.base));
    for (std::size_t p = 0; p < states.size(); ++p)
      for (int a = 0; a < rep.base; ++a)
        next[p * rep.base + a] = rep.digit(a).apply(states[p]);
    states = std::move(next);
  }
  return states;
}

Integer pow_int(int base, int exp) {
  Integer v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

/// Partial digit-matrix sums: prefix[a] = B_0 + ... + B_{a-1}.
std::vector<RatMat> digit_prefix_sums(const LinearRepresentation& rep) {
  std::vector<RatMat> prefix;
  prefix.emplace_back(rep.dim, rep.dim);
  for (int a = 0; a < rep.base; ++a) prefix.push_back(prefix.back() + rep.digit(a));
  return prefix;
}

/// Exact vector sum of state vectors over [k^n, k^n + c), 0 <= c <= k^n(k-1),
/// by decomposing the prefix into k-adic blocks (cost O(n) matrix products).
Vec region_prefix(const LinearRepresentation& rep, int n, const Integer& c) {
  const int k = rep.base;
  const int d = rep.dim;
  Integer x = pow_int(k, n) + c;

  // Digits of x over positions 0..n; the top position may carry the pseudo
  // digit k when x = k^{n+1}.
  std::vector<int> dig(n + 1, 0);
  Integer rest = x;
  bool overflow = x == pow_int(k, n + 1);
  if (overflow) {
    dig[n] = k;
  } else {
    for (int t = 0; t <= n; ++t) {
      Integer q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rest.get_mpz_t(),
                  Integer(k).get_mpz_t());
      dig[t] = static_cast<int>(r.get_si());
      rest = q;
    }
  }

  std::vector<RatMat> prefix = digit_prefix_sums(rep);
  RatMat b = rep.matrix_sum();

  // Suffix vectors r_t = B_{dig[t]} ... B_{dig[n]} w (identity past the top).
  std::vector<Vec> suffix(n + 2);
  suffix[n + 1] = rep.terminal;
  for (int t = n; t >= 0; --t)
    suffix[t] = overflow && t == n ? rep.terminal
                                   : rep.digit(dig[t] % k).apply(suffix[t + 1]);

  // sum_t B^t S_t r_{t+1}, where S_t sums digit matrices below dig[t]
  // (starting from 1 at the top position); Horner from the top.
  Vec acc(d, Rational(0));
  for (int t = n; t >= 0; --t) {
    Vec term(d, Rational(0));
    int lo = t == n ? 1 : 0;
    if (dig[t] > lo) {
      RatMat s = prefix[dig[t]] - prefix[lo];
      term = s.apply(suffix[t + 1]);
    }
    if (t == n) {
      acc = term;
    } else {
      acc = b.apply(acc);
      for (int i = 0; i < d; ++i) acc[i] += term[i];
    }
  }
  return acc;
}

}  // namespace

Rational PurePointMeasure::point(std::size_t m) const {
  Rational denom(pow_int(base, level) * (base - 1));
  return Rational(static_cast<unsigned long>(m)) / denom;
}

MeasureVector approximant(const LinearRepresentation& rep, int n) {
  Vec sigma = sigma_vector(rep, n).values;
  for (const auto& s : sigma)
    if (s == 0)
      throw HypothesisError("degenerate normalisation: Sigma_i(n) vanishes");
  std::vector<Vec> states = fundamental_states(rep, n);
  MeasureVector mv;
  for (int i = 0; i < rep.dim; ++i) {
    PurePointMeasure mu;
    mu.level = n;
    mu.base = rep.base;
    mu.weights.reserve(states.size());
    for (const auto& v : states) mu.weights.push_back(v[i] / sigma[i]);
    mv.components.push_back(std::move(mu));
  }
  return mv;
}

CocycleMatrix cocycle_matrix(const LinearRepresentation& rep, int n) {
  if (n < 1) throw FormatError("cocycle level must be >= 1");
  CocycleMatrix a;
  a.level = n;
  a.sigma_prev = sigma_vector(rep, n - 1).values;
  a.sigma_cur = sigma_vector(rep, n).values;
  for (const auto& s : a.sigma_cur)
    if (s == 0)
      throw HypothesisError("degenerate normalisation: Sigma_i(n) vanishes");
  a.digit_matrices = rep.digit_matrices;
  return a;
}

RatMat evaluate_at(const CocycleMatrix& a, const Rational& z) {
  const std::size_t d = a.sigma_cur.size();
  RatMat bz(d, d);
  Rational zpow = 1;
  for (const auto& digit : a.digit_matrices) {
    bz = bz + digit * zpow;
    zpow *= z;
  }
  RatMat out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out(i, j) = a.sigma_prev[j] * bz(i, j) / a.sigma_cur[i];
  return out;
}

std::vector<std::complex<double>> evaluate_at(const CocycleMatrix& a,
                                              std::complex<double> z) {
  const std::size_t d = a.sigma_cur.size();
  std::vector<std::complex<double>> out(d * d, 0.0);
  std::complex<double> zpow = 1.0;
  for (const auto& digit : a.digit_matrices) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        out[i * d + j] += to_double(digit(i, j)) * zpow;
    zpow *= z;
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out[i * d + j] *= to_double(a.sigma_prev[j] / a.sigma_cur[i]);
  return out;
}

MeasureVector refine_step(const LinearRepresentation& rep,
                          const MeasureVector& previous) {
  const int n = previous.level() + 1;
  const int k = rep.base;
  const int d = rep.dim;
  Vec sigma_prev = sigma_vector(rep, n - 1).values;
  Vec sigma_cur = sigma_vector(rep, n).values;
  for (const auto& s : sigma_cur)
    if (s == 0)
      throw HypothesisError("degenerate normalisation: Sigma_i(n) vanishes");

  const std::size_t old_size = previous.components.front().weights.size();
  MeasureVector out;
  for (int i = 0; i < d; ++i) {
    PurePointMeasure mu;
    mu.level = n;
    mu.base = k;
    mu.weights.assign(old_size * static_cast<std::size_t>(k), Rational(0));
    out.components.push_back(std::move(mu));
  }
  for (std::size_t l = 0; l < old_size; ++l) {
    for (int a = 0; a < k; ++a) {
      const RatMat& ba = rep.digit(a);
      for (int i = 0; i < d; ++i) {
        Rational acc = 0;
        for (int j = 0; j < d; ++j) {
          const Rational& entry = ba(i, j);
          if (entry == 0) continue;
          acc += entry * sigma_prev[j] * previous.components[j].weights[l];
        }
        if (acc != 0)
          out.components[i].weights[l * k + a] = acc / sigma_cur[i];
      }
    }
  }
  return out;
}

Vec empirical_cdf(const LinearRepresentation& rep, int n, const Rational& x,
                  bool closed) {
  MeasureVector mv = approximant(rep, n);
  Rational grid = Rational(pow_int(rep.base, n) * (rep.base - 1));
  Rational bound = x * grid;
  Vec out(rep.dim, Rational(0));
  const std::size_t size = mv.components.front().weights.size();
  for (int i = 0; i < rep.dim; ++i) {
    for (std::size_t m = 0; m < size; ++m) {
      Rational idx(static_cast<unsigned long>(m));
      bool in = closed ? idx <= bound : idx < bound;
      if (!in) break;
      out[i] += mv.components[i].weights[m];
    }
  }
  return out;
}

std::complex<double> fourier_empirical(const PurePointMeasure& mu, double t) {
  const double denom =
      std::pow(static_cast<double>(mu.base), mu.level) * (mu.base - 1);
  std::complex<double> acc = 0.0;
  for (std::size_t m = 0; m < mu.weights.size(); ++m) {
    double phase = -2.0 * std::numbers::pi * t * static_cast<double>(m) / denom;
    acc += to_double(mu.weights[m]) * std::polar(1.0, phase);
  }
  return acc;
}

FourierProduct fourier_product(const LinearRepresentation& rep, double t, int N) {
  const int k = rep.base;
  const int d = rep.dim;
  RatMat b = rep.matrix_sum();
  std::vector<Vec> sigma(N + 1);
  sigma[0] = sigma_seed(rep);
  for (int n = 1; n <= N; ++n) sigma[n] = b.apply(sigma[n - 1]);
  for (int n = 0; n <= N; ++n)
    for (const auto& s : sigma[n])
      if (s == 0)
        throw HypothesisError("degenerate normalisation: Sigma_i(n) vanishes");

  // Level-0 coefficients: weights f_i(1 + m)/Sigma_i(0) at points m/(k-1).
  std::vector<std::complex<double>> coeff(d, 0.0);
  for (int a = 1; a < k; ++a) {
    Vec v = rep.digit(a).apply(rep.terminal);
    double phase = -2.0 * std::numbers::pi * t * (a - 1) / (k - 1);
    std::complex<double> e = std::polar(1.0, phase);
    for (int i = 0; i < d; ++i)
      coeff[i] += to_double(v[i] / sigma[0][i]) * e;
  }

  FourierProduct result;
  std::vector<std::complex<double>> previous;
  double grid = static_cast<double>(k - 1);
  for (int n = 1; n <= N; ++n) {
    grid *= static_cast<double>(k);
    CocycleMatrix a;
    a.level = n;
    a.sigma_prev = sigma[n - 1];
    a.sigma_cur = sigma[n];
    a.digit_matrices = rep.digit_matrices;
    std::complex<double> z = std::polar(1.0, -2.0 * std::numbers::pi * t / grid);
    std::vector<std::complex<double>> an = evaluate_at(a, z);
    std::vector<std::complex<double>> next(d, 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) next[i] += an[i * d + j] * coeff[j];
    previous = coeff;
    coeff = std::move(next);
  }
  result.coefficients = coeff;
  result.last_delta = 0.0;
  for (int i = 0; i < d; ++i)
    result.last_delta = std::max(result.last_delta, std::abs(coeff[i] - previous[i]));
  return result;
}

UniquenessReport uniqueness_check(const LinearRepresentation& rep,
                                  const std::vector<double>& t_values, int N) {
  UniquenessReport report;
  report.advisory = !is_primitive_rep(rep).primitive;
  report.pass = true;
  for (double t : t_values) {
    FourierProduct fp = fourier_product(rep, t, N);
    UniquenessReport::Entry entry;
    entry.t = t;
    entry.last_delta = fp.last_delta;
    for (std::size_t i = 0; i < fp.coefficients.size(); ++i)
      for (std::size_t j = i + 1; j < fp.coefficients.size(); ++j)
        entry.max_pairwise = std::max(
            entry.max_pairwise, std::abs(fp.coefficients[i] - fp.coefficients[j]));
    if (entry.max_pairwise > 1e-5) report.pass = false;
    report.entries.push_back(entry);
  }
  return report;
}

ScanSeries scan_interval(const LinearRepresentation& rep, const Rational& a,
                         const Rational& b, int n_max) {
  const int k = rep.base;
  if (a < 0 || b > 1 || a > b) throw FormatError("scan interval must satisfy 0 <= a <= b <= 1");

  // Smallest q with e (k-1) k^q integral for both endpoints.
  auto adic_depth = [&](const Rational& e) {
    Rational scaled = e * (k - 1);
    for (int q = 0; q <= 256; ++q) {
      if (scaled.get_den() == 1) return q;
      scaled *= k;
    }
    throw FormatError("scan endpoints must be k-adic rationals");
  };
  const int q = std::max(adic_depth(a), adic_depth(b));

  auto index_bound = [&](const Rational& e, int n) {
    Rational scaled = e * Rational(pow_int(k, n) * (k - 1));
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), scaled.get_num().get_mpz_t(),
               scaled.get_den().get_mpz_t());
    return c;
  };

  RatMat bsum = rep.matrix_sum();
  Vec sigma = sigma_seed(rep);  // Sigma(0)
  ScanSeries series;

  // Fast path state for n >= q: numerator vector B^{n-q} (u_b - u_a).
  Vec diff;
  for (int n = 1; n <= n_max; ++n) {
    sigma = bsum.apply(sigma);
    Vec numerator;
    if (n >= q) {
      if (diff.empty()) {
        Vec ub = region_prefix(rep, std::max(q, 1), index_bound(b, std::max(q, 1)));
        Vec ua = region_prefix(rep, std::max(q, 1), index_bound(a, std::max(q, 1)));
        diff.assign(rep.dim, Rational(0));
        for (int i = 0; i < rep.dim; ++i) diff[i] = ub[i] - ua[i];
        // diff now corresponds to level max(q, 1); advance it to level n.
        for (int lvl = std::max(q, 1); lvl < n; ++lvl) diff = bsum.apply(diff);
      } else {
        diff = bsum.apply(diff);
      }
      numerator = diff;
    } else {
      Vec ub = region_prefix(rep, n, index_bound(b, n));
      Vec ua = region_prefix(rep, n, index_bound(a, n));
      numerator.assign(rep.dim, Rational(0));
      for (int i = 0; i < rep.dim; ++i) numerator[i] = ub[i] - ua[i];
    }
    ScanEntry entry;
    entry.level = n;
    Rational sigma_l = dot(rep.selector, sigma);
    if (sigma_l == 0) {
      entry.sigma_vanishes = true;
      entry.mass = 0;
    } else {
      entry.mass = dot(rep.selector, numerator) / sigma_l;
    }
    series.entries.push_back(std::move(entry));
  }
  return series;
}

double total_variation_estimate(
    const std::vector<std::pair<double, double>>& samples) {
  double tv = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].first <= samples[i - 1].first)
      throw FormatError("total variation grid must be strictly increasing");
    tv += std::abs(samples[i].second - samples[i - 1].second);
  }
  return tv;
}

}  // namespace regmeas
