#include "regmeas/sums.hpp"

#include <cmath>
#include <cstdlib>

#include "regmeas/errors.hpp"

namespace regmeas {

namespace {

constexpr std::uint64_t kBruteGuard = 1ULL << 24;

std::uint64_t checked_pow(int base, int exp) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > kBruteGuard) throw GuardError("brute-force range exceeds 2^24");
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

}  // namespace

Vec sigma_seed(const LinearRepresentation& rep) {
  Vec seed(rep.dim, Rational(0));
  for (int a = 1; a < rep.base; ++a) {
    Vec t = rep.digit(a).apply(rep.terminal);
    for (int i = 0; i < rep.dim; ++i) seed[i] += t[i];
  }
  return seed;
}

SigmaVector sigma_vector(const LinearRepresentation& rep, int n) {
  if (n < 0) throw FormatError("sigma level must be >= 0");
  RatMat b = rep.matrix_sum();
  Vec v = sigma_seed(rep);
  for (int i = 0; i < n; ++i) v = b.apply(v);
  return {n, std::move(v)};
}

SigmaVector brute_sigma(const LinearRepresentation& rep, int n) {
  std::uint64_t hi = checked_pow(rep.base, n + 1);
  std::uint64_t lo = hi / static_cast<std::uint64_t>(rep.base);
  if (n == 0) lo = 1;
  Vec sum(rep.dim, Rational(0));
  for (std::uint64_t m = lo; m < hi; ++m) {
    Vec v = state_vector(rep, m);
    for (int i = 0; i < rep.dim; ++i) sum[i] += v[i];
  }
  return {n, std::move(sum)};
}

Rational partial_sum(const LinearRepresentation& rep, std::uint64_t x) {
  if (x > kBruteGuard) throw GuardError("partial-sum range exceeds 2^24");
  Rational acc = 0;
  for (std::uint64_t m = 0; m <= x; ++m) acc += evaluate(rep, m);
  return acc;
}

GrowthReport sigma_growth(const LinearRepresentation& rep, int n_max) {
  if (n_max < 4) throw FormatError("sigma_growth requires n_max >= 4");
  const int d = rep.dim;
  RatMat b = rep.matrix_sum();
  std::vector<Vec> sigma(n_max + 1);
  sigma[0] = sigma_seed(rep);
  for (int n = 1; n <= n_max; ++n) sigma[n] = b.apply(sigma[n - 1]);

  GrowthReport report;
  for (int n = 0; n <= n_max; ++n) {
    if (sigma[n][0] == 0) {
      report.vanishing_level = n;
      break;
    }
  }

  // Ratio window at the tail; ratios of |Sigma_1|.
  const int window = std::min(8, n_max - 1);
  std::vector<double> ratios;
  for (int n = n_max - window; n < n_max; ++n) {
    if (sigma[n][0] == 0 || sigma[n + 1][0] == 0) continue;
    Rational r = sigma[n + 1][0] / sigma[n][0];
    ratios.push_back(std::abs(to_double(r)));
  }
  if (ratios.empty()) {
    report.converged = false;
    return report;
  }

  // Model |Sigma_1(n+1)/Sigma_1(n)| = rho ((n+1)/n)^ell; pick the integer
  // ell in [0, d) whose implied rho estimates have the least spread.
  double best_spread = 0.0;
  for (int ell = 0; ell < d; ++ell) {
    std::vector<double> est;
    int n0 = n_max - static_cast<int>(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      double n = static_cast<double>(n0 + static_cast<int>(i));
      est.push_back(ratios[i] / std::pow((n + 1.0) / n, ell));
    }
    double mean = 0.0;
    for (double e : est) mean += e;
    mean /= static_cast<double>(est.size());
    double spread = 0.0;
    for (double e : est) spread = std::max(spread, std::abs(e - mean));
    if (ell == 0 || spread < best_spread) {
      best_spread = spread;
      report.ell_hat = ell;
      report.rho_hat = mean;
    }
  }
  report.converged = best_spread <= 1e-3 * std::max(1.0, report.rho_hat);

  report.quotients.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (sigma[n_max][i] == 0) continue;
      report.quotients[static_cast<std::size_t>(i) * d + j] =
          to_double(sigma[n_max - 1][j] / sigma[n_max][i]);
    }

  report.c_estimates.assign(d, 0.0);
  double n = static_cast<double>(n_max);
  double scale = std::pow(report.rho_hat, n) * std::pow(n, report.ell_hat);
  if (scale > 0)
    for (int i = 0; i < d; ++i)
      report.c_estimates[i] = to_double(sigma[n_max][i]) / scale;
  return report;
}

}  // namespace regmeas
