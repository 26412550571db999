#include "regmeas/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <nlohmann/json.hpp>

#include "regmeas/errors.hpp"
#include "regmeas/spectral.hpp"

namespace regmeas {

namespace {

// Small dense double helpers, row-major.
std::vector<double> dmatmul(const std::vector<double>& a, std::size_t ar,
                            std::size_t ac, const std::vector<double>& b,
                            std::size_t bc) {
  std::vector<double> out(ar * bc, 0.0);
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t l = 0; l < ac; ++l) {
      double x = a[i * ac + l];
      if (x == 0.0) continue;
      for (std::size_t j = 0; j < bc; ++j) out[i * bc + j] += x * b[l * bc + j];
    }
  return out;
}

std::vector<double> dinverse(std::vector<double> a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (std::abs(a[pivot * n + col]) < 1e-14)
      throw NumericalError("singular matrix in dilation arithmetic");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a[pivot * n + j], a[col * n + j]);
      std::swap(inv[pivot * n + j], inv[col * n + j]);
    }
    double p = a[col * n + col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col * n + j] /= p;
      inv[col * n + j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r * n + j] -= f * a[col * n + j];
        inv[r * n + j] -= f * inv[col * n + j];
      }
    }
  }
  return inv;
}

std::vector<double> to_doubles(const RatMat& m) {
  std::vector<double> out(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out[i * m.cols() + j] = to_double(m(i, j));
  return out;
}

/// Z^j M for the superdiagonal shift Z: entry i becomes M[i + j].
std::vector<double> shift(const std::vector<double>& m, int j) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i + j < m.size(); ++i) out[i] = m[i + j];
  return out;
}

/// L * (d x v matrix) * vec.
double bracket(const Vec& selector, const std::vector<double>& mat,
               std::size_t d, std::size_t v, const std::vector<double>& vec) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double li = to_double(selector[i]);
    if (li == 0.0) continue;
    double row = 0.0;
    for (std::size_t c = 0; c < v; ++c) row += mat[i * v + c] * vec[c];
    acc += li * row;
  }
  return acc;
}

/// Rational reconstruction of a double by continued fractions, verified
/// exactly as a root of the characteristic polynomial; nullopt when no small
/// rational nearby is a root.
std::optional<Rational> rational_root_near(const std::vector<Rational>& poly,
                                           double x) {
  auto is_root = [&](const Rational& r) {
    Rational acc = 0;
    for (std::size_t i = poly.size(); i-- > 0;) acc = acc * r + poly[i];
    return acc == 0;
  };
  double rem = x;
  Integer p0 = 1, p1 = 0, q0 = 0, q1 = 1;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(rem);
    if (std::abs(fl) > 1e15) break;
    Integer a(static_cast<long>(fl));
    Integer p = a * p0 + p1, q = a * q0 + q1;
    if (q > 1000000) break;
    if (q != 0) {
      Rational cand(p, q);
      cand.canonicalize();
      if (std::abs(to_double(cand) - x) < 1e-7 * (1.0 + std::abs(x)) &&
          is_root(cand))
        return cand;
    }
    p1 = p0; p0 = p;
    q1 = q0; q0 = q;
    double frac = rem - fl;
    if (frac < 1e-12) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

/// Multiplicity of the exact root r in the monic polynomial (synthetic
/// division until the quotient no longer vanishes at r).
int root_multiplicity(std::vector<Rational> poly, const Rational& r) {
  int mult = 0;
  while (poly.size() > 1) {
    // Evaluate and divide by (x - r) in one Horner pass.
    std::vector<Rational> quotient(poly.size() - 1);
    Rational acc = poly.back();
    for (std::size_t i = poly.size() - 1; i-- > 0;) {
      quotient[i] = acc;
      acc = acc * r + poly[i];
    }
    if (acc != 0) break;
    ++mult;
    poly = std::move(quotient);
  }
  return mult;
}

JordanData jordan_simple(const RatMat& b, const Vec& terminal, double rho,
                         double r_gap) {
  const std::size_t d = b.rows();
  std::vector<double> bm = to_doubles(b);
  auto iterate = [&](bool left) {
    std::vector<double> x(d, 1.0);
    for (int it = 0; it < 20000; ++it) {
      std::vector<double> y(d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          y[left ? j : i] += bm[i * d + j] * x[left ? i : j];
      std::size_t top = 0;
      for (std::size_t i = 1; i < d; ++i)
        if (std::abs(y[i]) > std::abs(y[top])) top = i;
      if (y[top] == 0.0)
        throw NumericalError("power iteration collapsed to zero");
      const double pivot = y[top];
      double delta = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        y[i] /= pivot;
        delta = std::max(delta, std::abs(y[i] - x[i]));
      }
      x = std::move(y);
      if (delta < 1e-15) break;
    }
    return x;
  };
  std::vector<double> v = iterate(false);
  std::vector<double> u = iterate(true);
  double uw = 0.0, uv = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    uw += u[i] * to_double(terminal[i]);
    uv += u[i] * v[i];
  }
  if (std::abs(uv) < 1e-12)
    throw NumericalError("left/right dominant eigenvectors nearly orthogonal");
  JordanData jd;
  jd.rho = rho;
  jd.v = 1;
  jd.V = v;
  jd.M = {uw / uv};
  jd.r_gap = r_gap;
  return jd;
}

JordanData jordan_defective(const RatMat& b, const Vec& terminal,
                            const Rational& rho, int mult, double r_gap) {
  const std::size_t d = b.rows();
  RatMat shifted = b - RatMat::identity(d) * rho;

  // Block size: smallest m with dim ker (B - rho I)^m equal to the
  // algebraic multiplicity.
  RatMat power = RatMat::identity(d);
  int block = 0;
  std::vector<std::vector<Vec>> kernels(1);
  for (int m = 1; m <= mult; ++m) {
    power = power * shifted;
    kernels.push_back(null_space(power));
    if (static_cast<int>(kernels[m].size()) == mult) {
      block = m;
      break;
    }
  }
  if (block == 0)
    throw HypothesisError(
        "dominant eigenvalue has several Jordan blocks; supply Jordan data "
        "explicitly");

  // Chain top: a kernel vector of (B - rho I)^block outside the next-lower
  // kernel.
  RatMat lower = RatMat::identity(d);
  for (int m = 1; m < block; ++m) lower = lower * shifted;
  std::optional<Vec> top;
  for (const auto& cand : kernels[block]) {
    Vec image = lower.apply(cand);
    bool zero = true;
    for (const auto& x : image)
      if (x != 0) zero = false;
    if (!zero) {
      top = cand;
      break;
    }
  }
  if (!top)
    throw NumericalError("generalized eigenvector chain construction failed");

  // Columns c_j = (B - rho I)^{block - j} top, j = 1..block.
  std::vector<Vec> cols(block);
  cols[block - 1] = *top;
  for (int j = block - 2; j >= 0; --j) cols[j] = shifted.apply(cols[j + 1]);

  // Coordinates of the terminal vector: solve [V | complement basis] x = w,
  // complement = column space of (B - rho I)^mult.
  RatMat full = RatMat::identity(d);
  for (int m = 0; m < mult; ++m) full = full * shifted;
  std::vector<Vec> complement = column_space(full);
  RatMat system(d, static_cast<std::size_t>(block) + complement.size());
  for (std::size_t i = 0; i < d; ++i) {
    for (int j = 0; j < block; ++j) system(i, j) = cols[j][i];
    for (std::size_t j = 0; j < complement.size(); ++j)
      system(i, block + j) = complement[j][i];
  }
  std::optional<Vec> coords = solve_linear(system, terminal);
  if (!coords)
    throw HypothesisError(
        "terminal vector does not split along the dominant generalized "
        "eigenspace; supply Jordan data explicitly");

  JordanData jd;
  jd.rho = to_double(rho);
  jd.v = block;
  jd.V.resize(d * static_cast<std::size_t>(block));
  for (std::size_t i = 0; i < d; ++i)
    for (int j = 0; j < block; ++j) jd.V[i * block + j] = to_double(cols[j][i]);
  jd.M.resize(block);
  for (int j = 0; j < block; ++j) jd.M[j] = to_double((*coords)[j]);
  jd.r_gap = r_gap;
  return jd;
}

}  // namespace

std::vector<double> GridFunction::eval(double x) const {
  const std::size_t cells = values.size() - 1;
  const std::size_t size = static_cast<std::size_t>(d) * v;
  if (x <= 0.0) return std::vector<double>(size, 0.0);
  if (x >= 1.0) return values.back();
  double t = x * static_cast<double>(cells);
  std::size_t j = static_cast<std::size_t>(std::floor(t));
  if (j >= cells) return values.back();
  double fr = t - static_cast<double>(j);
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i)
    out[i] = values[j][i] * (1.0 - fr) + values[j + 1][i] * fr;
  return out;
}

JordanData jordan_data(const LinearRepresentation& rep) {
  RatMat b = rep.matrix_sum();
  std::vector<std::complex<double>> roots = eigenvalues(b);
  double rho = 0.0;
  for (const auto& z : roots) rho = std::max(rho, std::abs(z));
  const double tol = 1e-7 * (1.0 + rho);

  std::complex<double> dominant;
  int mult = 0;
  double r_gap = 0.0;
  bool dominant_set = false;
  for (const auto& z : roots) {
    if (std::abs(z) >= rho - tol) {
      if (!dominant_set) {
        dominant = z;
        dominant_set = true;
        mult = 1;
      } else if (std::abs(z - dominant) <= tol) {
        ++mult;
      } else {
        throw HypothesisError("non-unique dominant eigenvalue");
      }
    } else {
      r_gap = std::max(r_gap, std::abs(z));
    }
  }
  if (!dominant_set || std::abs(dominant.imag()) > tol)
    throw HypothesisError("non-unique dominant eigenvalue");

  if (mult == 1) return jordan_simple(b, rep.terminal, dominant.real(), r_gap);

  std::vector<Rational> poly = characteristic_polynomial(b);
  std::optional<Rational> exact = rational_root_near(poly, dominant.real());
  if (!exact)
    throw HypothesisError(
        "defective dominant eigenvalue is not rational; supply Jordan data "
        "explicitly");
  int exact_mult = root_multiplicity(poly, *exact);
  return jordan_defective(b, rep.terminal, *exact, exact_mult, r_gap);
}

JordanData jordan_data_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  JordanData jd;
  jd.rho = j.at("rho").get<double>();
  jd.v = j.at("v").get<int>();
  if (jd.v < 1) throw FormatError("Jordan block size must be >= 1");
  for (const auto& row : j.at("V")) {
    if (static_cast<int>(row.size()) != jd.v)
      throw FormatError("Jordan V rows must have v entries");
    for (const auto& x : row) jd.V.push_back(x.get<double>());
  }
  for (const auto& x : j.at("M")) jd.M.push_back(x.get<double>());
  if (static_cast<int>(jd.M.size()) != jd.v)
    throw FormatError("Jordan M must have v entries");
  if (j.contains("r_gap")) jd.r_gap = j.at("r_gap").get<double>();
  return jd;
}

GridFunction solve_dilation(const LinearRepresentation& rep,
                            const JordanData& jordan, int depth, double tol) {
  if (depth < 4) throw FormatError("dilation grid depth must be >= 4");
  const int k = rep.base;
  const std::size_t d = rep.dim;
  const std::size_t v = jordan.v;
  if (jordan.V.size() != d * v)
    throw FormatError("Jordan V shape does not match the representation");

  double upper = std::numeric_limits<double>::max();
  for (int jsr_depth : {8, 10, 12}) {
    if (static_cast<double>(jsr_depth) * std::log2(static_cast<double>(k)) >
        20.0)
      break;
    upper = jsr_bounds(rep.digit_matrices, jsr_depth).upper;
    if (jordan.rho > upper) break;
  }
  if (jordan.rho <= upper)
    throw HypothesisError(
        "cannot certify rho above the joint-spectral-radius upper bound; the "
        "dilation equation may not have a unique solution");

  std::size_t cells = 1;
  for (int i = 0; i < depth; ++i) {
    cells *= static_cast<std::size_t>(k);
    if (cells > (1u << 22))
      throw GuardError("dilation grid exceeds the 2^22 size guard");
  }

  std::vector<std::vector<double>> digits;
  for (const auto& m : rep.digit_matrices) digits.push_back(to_doubles(m));

  std::vector<double> jmat(v * v, 0.0);
  for (std::size_t i = 0; i < v; ++i) {
    jmat[i * v + i] = jordan.rho;
    if (i + 1 < v) jmat[i * v + i + 1] = 1.0;
  }
  std::vector<double> jinv = dinverse(jmat, v);

  GridFunction grid;
  grid.depth = depth;
  grid.base = k;
  grid.d = static_cast<int>(d);
  grid.v = static_cast<int>(v);
  grid.contraction = upper / jordan.rho;
  grid.values.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    double t = static_cast<double>(j) / static_cast<double>(cells);
    grid.values[j].resize(d * v);
    for (std::size_t i = 0; i < d * v; ++i) grid.values[j][i] = t * jordan.V[i];
  }

  auto sweep_value = [&](const std::vector<std::vector<double>>& f,
                         std::size_t j) {
    std::vector<double> acc(d * v, 0.0);
    for (int a = 0; a < k; ++a) {
      long idx = static_cast<long>(k) * static_cast<long>(j) -
                 static_cast<long>(a) * static_cast<long>(cells);
      const std::vector<double>* fv;
      if (idx <= 0) continue;
      if (idx >= static_cast<long>(cells))
        fv = &f[cells];
      else
        fv = &f[static_cast<std::size_t>(idx)];
      std::vector<double> term = dmatmul(digits[a], d, d, *fv, v);
      for (std::size_t i = 0; i < d * v; ++i) acc[i] += term[i];
    }
    return dmatmul(acc, d, v, jinv, v);
  };

  const int cap = std::max(
      64, static_cast<int>(std::ceil(10.0 * depth /
                                     std::log(jordan.rho / upper))));
  double delta = std::numeric_limits<double>::max();
  std::vector<std::vector<double>> next = grid.values;
  int it = 0;
  for (; it < cap && delta > tol; ++it) {
    delta = 0.0;
    for (std::size_t j = 1; j < cells; ++j) {
      std::vector<double> nf = sweep_value(grid.values, j);
      for (std::size_t i = 0; i < d * v; ++i)
        delta = std::max(delta, std::abs(nf[i] - grid.values[j][i]));
      next[j] = std::move(nf);
    }
    std::swap(grid.values, next);
  }
  grid.iterations = it;
  if (delta > tol)
    throw NumericalError("dilation iteration did not converge; last update " +
                         std::to_string(delta));

  grid.residual = 0.0;
  for (std::size_t j = 1; j < cells; ++j) {
    std::vector<double> lhs = dmatmul(grid.values[j], d, v, jmat, v);
    std::vector<double> rhs = dmatmul(sweep_value(grid.values, j), d, v, jmat, v);
    for (std::size_t i = 0; i < d * v; ++i)
      grid.residual = std::max(grid.residual, std::abs(lhs[i] - rhs[i]));
  }
  return grid;
}

std::optional<int> nonvanishing_index(const LinearRepresentation& rep,
                                      const JordanData& jordan,
                                      const GridFunction& grid) {
  const std::size_t d = jordan.V.size() / jordan.v;
  const std::size_t v = jordan.v;
  std::vector<double> f1k = grid.eval(1.0 / rep.base);
  std::vector<double> diff(d * v);
  for (std::size_t i = 0; i < d * v; ++i) diff[i] = jordan.V[i] - f1k[i];

  double scale = 0.0;
  std::vector<double> brackets(v);
  for (int j = 0; j < jordan.v; ++j) {
    brackets[j] = bracket(rep.selector, diff, d, v, shift(jordan.M, j));
    scale = std::max(scale,
                     std::abs(bracket(rep.selector, jordan.V, d, v,
                                      shift(jordan.M, j))));
  }
  const double tol = 1e-9 * (1.0 + scale);
  for (int j = jordan.v - 1; j >= 0; --j)
    if (std::abs(brackets[j]) > tol) return j;
  return std::nullopt;
}

double closed_form_cdf(const LinearRepresentation& rep,
                       const JordanData& jordan, const GridFunction& grid,
                       int ell, double x) {
  if (x < 0.0 || x > 1.0)
    throw FormatError("distribution function argument must lie in [0,1]");
  if (ell < 0 || ell >= jordan.v)
    throw FormatError("nonvanishing index out of range");
  const std::size_t d = jordan.V.size() / jordan.v;
  const std::size_t v = jordan.v;
  const int k = rep.base;

  std::vector<double> zm = shift(jordan.M, ell);
  std::vector<double> f1k = grid.eval(1.0 / k);
  std::vector<double> den_mat(d * v), num_mat(d * v);
  std::vector<double> fx = grid.eval((1.0 + (k - 1) * x) / k);
  for (std::size_t i = 0; i < d * v; ++i) {
    den_mat[i] = jordan.V[i] - f1k[i];
    num_mat[i] = fx[i] - f1k[i];
  }
  double den = bracket(rep.selector, den_mat, d, v, zm);
  if (std::abs(den) < 1e-12)
    throw HypothesisError(
        "degenerate representation: the distribution normaliser vanishes");
  return bracket(rep.selector, num_mat, d, v, zm) / den;
}

double dumas_partial_sum(const LinearRepresentation& rep,
                         const JordanData& jordan, const GridFunction& grid,
                         double x) {
  if (x < 1.0) throw FormatError("partial-sum argument must be >= 1");
  if (std::abs(jordan.rho - 1.0) < 1e-12)
    throw HypothesisError("partial-sum asymptotics require rho != 1");
  const std::size_t d = jordan.V.size() / jordan.v;
  const std::size_t v = jordan.v;
  const int k = rep.base;

  double y = std::log(x) / std::log(static_cast<double>(k));
  int n = static_cast<int>(std::floor(y + 1e-12));
  double fr = std::max(0.0, y - n);

  // C = (I - B_0) V (I_v - J)^{-1}.
  std::vector<double> b0 = to_doubles(rep.digit(0));
  std::vector<double> imb0(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      imb0[i * d + j] = (i == j ? 1.0 : 0.0) - b0[i * d + j];
  std::vector<double> imj(v * v, 0.0);
  for (std::size_t i = 0; i < v; ++i) {
    imj[i * v + i] = 1.0 - jordan.rho;
    if (i + 1 < v) imj[i * v + i + 1] = -1.0;
  }
  std::vector<double> c =
      dmatmul(dmatmul(imb0, d, d, jordan.V, v), d, v, dinverse(imj, v), v);

  std::vector<double> fv = grid.eval(std::pow(static_cast<double>(k), fr - 1.0));

  // P = (I + Z/rho)^n.
  std::vector<double> p(v * v, 0.0), step(v * v, 0.0);
  for (std::size_t i = 0; i < v; ++i) {
    p[i * v + i] = 1.0;
    step[i * v + i] = 1.0;
    if (i + 1 < v) step[i * v + i + 1] = 1.0 / jordan.rho;
  }
  for (int i = 0; i < n; ++i) p = dmatmul(p, v, v, step, v);

  double rho_pow = std::pow(jordan.rho, n + 1);
  std::vector<double> inner(d * v);
  for (std::size_t i = 0; i < d * v; ++i) inner[i] = (fv[i] - c[i]) * rho_pow;
  std::vector<double> e = dmatmul(inner, d, v, p, v);
  for (std::size_t i = 0; i < d * v; ++i) e[i] += c[i];
  return bracket(rep.selector, e, d, v, jordan.M);
}

}  // namespace regmeas
