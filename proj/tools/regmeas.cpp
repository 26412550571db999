#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "regmeas/dilation.hpp"
#include "regmeas/errors.hpp"
#include "regmeas/linrep.hpp"
#include "regmeas/measure.hpp"
#include "regmeas/spectral.hpp"
#include "regmeas/sums.hpp"

using namespace regmeas;

namespace {

struct RepSource {
  std::string builtin_name;
  std::string file_path;

  LinearRepresentation load() const {
    if (!builtin_name.empty() && !file_path.empty())
      throw FormatError("give exactly one of --builtin and --file");
    if (!builtin_name.empty()) return builtin(builtin_name);
    if (!file_path.empty()) return load_representation(file_path);
    throw FormatError("a representation is required: --builtin or --file");
  }
};

void add_rep_options(CLI::App* cmd, RepSource& src) {
  cmd->add_option("--builtin", src.builtin_name, "built-in representation name");
  cmd->add_option("--file", src.file_path, "representation JSON file");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

struct Output {
  std::string path;
  std::ostringstream buffer;

  template <typename T>
  Output& operator<<(const T& x) {
    buffer << x;
    return *this;
  }

  void flush() {
    if (path.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream out(path);
      if (!out) throw FormatError("cannot open output file " + path);
      out << buffer.str();
    }
  }
};

/// Scalar sequence measure: combines the component approximants through the
/// selector, weights L.v(k^n+m) / (L.Sigma(n)).
Vec scalar_weights(const LinearRepresentation& rep, int n) {
  MeasureVector mv = approximant(rep, n);
  Vec sigma = sigma_vector(rep, n).values;
  Rational total = dot(rep.selector, sigma);
  if (total == 0)
    throw HypothesisError("selector-weighted fundamental sum vanishes");
  Vec out(mv.components.front().weights.size(), Rational(0));
  for (int i = 0; i < rep.dim; ++i) {
    Rational scale = rep.selector[i] * sigma[i] / total;
    if (scale == 0) continue;
    for (std::size_t m = 0; m < out.size(); ++m)
      out[m] += scale * mv.components[i].weights[m];
  }
  return out;
}

double scalar_cdf(const Vec& weights, int base, int level, double x) {
  double g = std::pow(static_cast<double>(base), level) * (base - 1);
  double acc = 0.0;
  std::size_t cut = x >= 1.0 ? weights.size()
                             : static_cast<std::size_t>(std::floor(x * g)) + 1;
  cut = std::min(cut, weights.size());
  for (std::size_t m = 0; m < cut; ++m) acc += to_double(weights[m]);
  return acc;
}

int run_eval(const RepSource& src, std::uint64_t from, std::uint64_t to,
             Output& out) {
  LinearRepresentation rep = src.load();
  out << "m,value\n";
  for (std::uint64_t m = from; m <= to; ++m)
    out << m << "," << rational_string(evaluate(rep, m)) << "\n";
  return 0;
}

int run_sums(const RepSource& src, int levels, Output& out) {
  LinearRepresentation rep = src.load();
  out << "n";
  for (int i = 1; i <= rep.dim; ++i) out << ",Sigma_" << i;
  out << "\n";
  RatMat b = rep.matrix_sum();
  Vec sigma = sigma_seed(rep);
  for (int n = 0; n <= levels; ++n) {
    if (n > 0) sigma = b.apply(sigma);
    out << n;
    for (const auto& s : sigma) out << "," << rational_string(s);
    out << "\n";
  }
  return 0;
}

int run_diagnose(const RepSource& src, int jsr_depth, Output& out) {
  LinearRepresentation rep = src.load();
  SpectrumReport spectrum = spectrum_report(rep);
  nlohmann::json j;
  for (const auto& z : spectrum.eigenvalues)
    j["eigenvalues"].push_back({z.real(), z.imag()});
  j["rho"] = spectrum.rho;
  j["dominant_unique"] = spectrum.dominant_unique;
  j["subdominant_modulus"] = spectrum.subdominant_modulus;
  j["primitive"] = spectrum.primitive;
  if (spectrum.positivity_power)
    j["positivity_power"] = *spectrum.positivity_power;
  else
    j["positivity_power"] = nullptr;
  j["notes"] = spectrum.notes;

  if (!spectrum.dominant_unique)
    throw HypothesisError("non-unique dominant eigenvalue");

  JsrBounds jsr = jsr_bounds(rep.digit_matrices, jsr_depth);
  j["jsr"] = {{"lower", jsr.lower}, {"upper", jsr.upper}, {"depth", jsr.depth}};
  try {
    HolderBound alpha = holder_bound(rep, jsr_depth);
    j["holder"] = {{"alpha_lower", alpha.alpha_lower},
                   {"alpha_upper", alpha.alpha_upper}};
  } catch (const HypothesisError& e) {
    j["holder"] = nullptr;
    j["notes"].push_back(e.what());
  }
  out << j.dump(2) << "\n";
  return 0;
}

int run_measure(const RepSource& src, int level, Output& out) {
  LinearRepresentation rep = src.load();
  MeasureVector mv = approximant(rep, level);
  out << "m,point";
  for (int i = 1; i <= rep.dim; ++i) out << ",w_" << i;
  out << "\n";
  const std::size_t size = mv.components.front().weights.size();
  for (std::size_t m = 0; m < size; ++m) {
    out << m << "," << rational_string(mv.components.front().point(m));
    for (int i = 0; i < rep.dim; ++i)
      out << "," << rational_string(mv.components[i].weights[m]);
    out << "\n";
  }
  return 0;
}

struct ClosedFormRoute {
  LinearRepresentation rep_prime;
  JordanData jordan;
  GridFunction grid;
  int ell = 0;

  double cdf(double x) const {
    return closed_form_cdf(rep_prime, jordan, grid, ell, x);
  }
};

ClosedFormRoute make_closed_form(const LinearRepresentation& rep,
                                 bool transpose, int depth,
                                 const std::string& jordan_file) {
  ClosedFormRoute route;
  route.rep_prime = transpose ? transpose_rep(rep) : rep;
  if (!jordan_file.empty()) {
    std::ifstream in(jordan_file);
    if (!in) throw FormatError("cannot open Jordan data file " + jordan_file);
    std::ostringstream text;
    text << in.rdbuf();
    route.jordan = jordan_data_from_json(text.str());
  } else {
    route.jordan = jordan_data(route.rep_prime);
  }
  route.grid = solve_dilation(route.rep_prime, route.jordan, depth);
  std::optional<int> ell =
      nonvanishing_index(route.rep_prime, route.jordan, route.grid);
  if (!ell)
    throw HypothesisError(
        "degenerate representation: every nonvanishing-index bracket is zero");
  route.ell = *ell;
  return route;
}

int run_cdf(const RepSource& src, bool empirical, bool closed_form, int level,
            int depth, int grid_points, bool no_transpose,
            const std::string& jordan_file, Output& out) {
  LinearRepresentation rep = src.load();
  if (!empirical && !closed_form) empirical = closed_form = true;

  std::optional<Vec> weights;
  if (empirical) weights = scalar_weights(rep, level);
  std::optional<ClosedFormRoute> route;
  if (closed_form)
    route = make_closed_form(rep, !no_transpose, depth, jordan_file);

  out << "x";
  if (empirical) out << ",empirical";
  if (closed_form) out << ",closed_form";
  out << "\n";
  double max_dev = 0.0;
  for (int g = 0; g <= grid_points; ++g) {
    double x = static_cast<double>(g) / grid_points;
    out << fmt(x);
    double e = 0.0, c = 0.0;
    if (empirical) {
      e = scalar_cdf(*weights, rep.base, level, x);
      out << "," << fmt(e);
    }
    if (closed_form) {
      c = route->cdf(x);
      out << "," << fmt(c);
    }
    out << "\n";
    if (empirical && closed_form)
      max_dev = std::max(max_dev, std::abs(e - c));
  }
  if (empirical && closed_form)
    out << "# max_deviation," << fmt(max_dev) << "\n";
  return 0;
}

int run_fourier(const RepSource& src, int t_max, int level, int truncation,
                Output& out) {
  LinearRepresentation rep = src.load();
  Vec weights = scalar_weights(rep, level);
  PurePointMeasure scalar;
  scalar.level = level;
  scalar.base = rep.base;
  scalar.weights = weights;

  out << "t,empirical_re,empirical_im";
  for (int i = 1; i <= rep.dim; ++i)
    out << ",product_" << i << "_re,product_" << i << "_im";
  out << ",max_pairwise,last_delta\n";
  for (int t = 1; t <= t_max; ++t) {
    std::complex<double> emp = fourier_empirical(scalar, t);
    FourierProduct prod = fourier_product(rep, t, truncation);
    double pairwise = 0.0;
    for (std::size_t i = 0; i < prod.coefficients.size(); ++i)
      for (std::size_t j = i + 1; j < prod.coefficients.size(); ++j)
        pairwise = std::max(
            pairwise, std::abs(prod.coefficients[i] - prod.coefficients[j]));
    out << t << "," << fmt(emp.real()) << "," << fmt(emp.imag());
    for (const auto& c : prod.coefficients)
      out << "," << fmt(c.real()) << "," << fmt(c.imag());
    out << "," << fmt(pairwise) << "," << fmt(prod.last_delta) << "\n";
  }
  return 0;
}

int run_scan(const RepSource& src, const std::vector<std::string>& interval,
             int levels, Output& out) {
  LinearRepresentation rep = src.load();
  Rational a = parse_rational(interval[0]);
  Rational b = parse_rational(interval[1]);
  ScanSeries series = scan_interval(rep, a, b, levels);
  out << "n,mass,mass_float,sigma_vanishes\n";
  for (const auto& entry : series.entries)
    out << entry.level << "," << rational_string(entry.mass) << ","
        << fmt(to_double(entry.mass)) << ","
        << (entry.sigma_vanishes ? 1 : 0) << "\n";
  return 0;
}

int run_lift(const RepSource& src, int power, Output& out) {
  LinearRepresentation rep = src.load();
  out << representation_to_json(lift_base(rep, power)) << "\n";
  return 0;
}

int run_conjugate(const RepSource& src,
                  const std::vector<std::string>& entries, Output& out) {
  LinearRepresentation rep = src.load();
  const std::size_t d = rep.dim;
  if (entries.size() != d * d)
    throw FormatError("conjugation matrix needs dim*dim rational entries");
  RatMat t(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      t(i, j) = parse_rational(entries[i * d + j]);
  out << representation_to_json(conjugate(rep, t)) << "\n";
  return 0;
}

int run_builtin(bool list, const std::string& emit, Output& out) {
  if (list != emit.empty())
    throw FormatError("builtin: give exactly one of --list and --emit");
  if (list) {
    for (const auto& name : builtin_names()) out << name << "\n";
  } else {
    out << representation_to_json(builtin(emit)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measure-theoretic analysis of k-regular sequences"};
  app.require_subcommand(1);

  // Honoured as an upper bound on worker threads; all current computations
  // run single-threaded, which trivially satisfies any cap.
  if (const char* threads = std::getenv("REGMEAS_THREADS"))
    (void)std::atoi(threads);

  RepSource src;
  Output out;
  std::string output_path;

  auto* eval_cmd = app.add_subcommand("eval", "sequence value table");
  std::uint64_t eval_from = 0, eval_to = 20;
  add_rep_options(eval_cmd, src);
  eval_cmd->add_option("--from", eval_from, "first index");
  eval_cmd->add_option("--to", eval_to, "last index");

  auto* sums_cmd = app.add_subcommand("sums", "fundamental-region sum table");
  int sums_levels = 10;
  add_rep_options(sums_cmd, src);
  sums_cmd->add_option("--levels", sums_levels, "largest level n");

  auto* diag_cmd = app.add_subcommand("diagnose", "spectral diagnostics");
  int diag_jsr_depth = 8;
  add_rep_options(diag_cmd, src);
  diag_cmd->add_option("--jsr-depth", diag_jsr_depth, "product length bound");

  auto* measure_cmd = app.add_subcommand("measure", "approximant weights");
  int measure_level = 4;
  add_rep_options(measure_cmd, src);
  measure_cmd->add_option("--level", measure_level, "approximant level n");

  auto* cdf_cmd = app.add_subcommand("cdf", "distribution function table");
  bool cdf_empirical = false, cdf_closed = false, cdf_no_transpose = false;
  int cdf_level = 14, cdf_depth = 12, cdf_grid = 64;
  std::string cdf_jordan_file;
  add_rep_options(cdf_cmd, src);
  cdf_cmd->add_flag("--empirical", cdf_empirical, "level-n approximant route");
  cdf_cmd->add_flag("--closed-form", cdf_closed, "dilation-equation route");
  cdf_cmd->add_option("--level", cdf_level, "empirical approximant level");
  cdf_cmd->add_option("--depth", cdf_depth, "dilation grid depth");
  cdf_cmd->add_option("--grid", cdf_grid, "number of x-grid cells");
  cdf_cmd->add_flag("--no-transpose", cdf_no_transpose,
                    "experimental: skip the transposition the closed form "
                    "requires; not the documented route");
  cdf_cmd->add_option("--jordan", cdf_jordan_file,
                      "JSON file overriding the computed Jordan data");

  auto* fourier_cmd =
      app.add_subcommand("fourier", "Fourier coefficient tables");
  int fourier_tmax = 8, fourier_level = 14, fourier_truncation = 30;
  add_rep_options(fourier_cmd, src);
  fourier_cmd->add_option("--t-max", fourier_tmax, "largest integer frequency");
  fourier_cmd->add_option("--level", fourier_level, "empirical level");
  fourier_cmd->add_option("--truncation", fourier_truncation,
                          "matrix product truncation N");

  auto* scan_cmd = app.add_subcommand("scan", "interval-mass series");
  std::vector<std::string> scan_interval_opt;
  int scan_levels = 20;
  add_rep_options(scan_cmd, src);
  scan_cmd
      ->add_option("--interval", scan_interval_opt,
                   "endpoints a b as exact rationals p/q")
      ->expected(2);
  scan_cmd->add_option("--levels", scan_levels, "largest level n");

  auto* lift_cmd = app.add_subcommand("lift", "reread in base k^j");
  int lift_power = 2;
  add_rep_options(lift_cmd, src);
  lift_cmd->add_option("--power", lift_power, "exponent j");

  auto* conj_cmd = app.add_subcommand("conjugate", "change of basis");
  std::vector<std::string> conj_entries;
  add_rep_options(conj_cmd, src);
  conj_cmd
      ->add_option("--matrix", conj_entries,
                   "row-major rational entries of T")
      ->expected(-1);

  auto* builtin_cmd = app.add_subcommand("builtin", "built-in representations");
  bool builtin_list = false;
  std::string builtin_emit;
  builtin_cmd->add_flag("--list", builtin_list, "list names");
  builtin_cmd->add_option("--emit", builtin_emit, "emit one as JSON");

  for (auto* cmd :
       {eval_cmd, sums_cmd, diag_cmd, measure_cmd, cdf_cmd, fourier_cmd,
        scan_cmd, lift_cmd, conj_cmd, builtin_cmd})
    cmd->add_option("--output", output_path, "write to file instead of stdout");

  CLI11_PARSE(app, argc, argv);
  out.path = output_path;

  try {
    int rc = 1;
    if (*eval_cmd) rc = run_eval(src, eval_from, eval_to, out);
    if (*sums_cmd) rc = run_sums(src, sums_levels, out);
    if (*diag_cmd) rc = run_diagnose(src, diag_jsr_depth, out);
    if (*measure_cmd) rc = run_measure(src, measure_level, out);
    if (*cdf_cmd)
      rc = run_cdf(src, cdf_empirical, cdf_closed, cdf_level, cdf_depth,
                   cdf_grid, cdf_no_transpose, cdf_jordan_file, out);
    if (*fourier_cmd)
      rc = run_fourier(src, fourier_tmax, fourier_level, fourier_truncation,
                       out);
    if (*scan_cmd) {
      if (scan_interval_opt.size() != 2)
        throw FormatError("scan requires --interval a b");
      rc = run_scan(src, scan_interval_opt, scan_levels, out);
    }
    if (*lift_cmd) rc = run_lift(src, lift_power, out);
    if (*conj_cmd) rc = run_conjugate(src, conj_entries, out);
    if (*builtin_cmd) rc = run_builtin(builtin_list, builtin_emit, out);
    out.flush();
    return rc;
  } catch (const HypothesisError& e) {
    nlohmann::json diag = {{"error", "hypothesis_violation"},
                           {"reason", e.what()}};
    std::cerr << diag.dump() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    nlohmann::json diag = {{"error", "numerical_failure"},
                           {"reason", e.what()}};
    std::cerr << diag.dump() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
