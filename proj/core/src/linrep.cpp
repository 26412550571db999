#include "regmeas/linrep.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "regmeas/errors.hpp"

namespace regmeas {

void LinearRepresentation::validate() const {
  if (base < 2) throw FormatError("invalid base: k must be >= 2");
  if (dim < 1) throw FormatError("dimension must be >= 1");
  if (static_cast<int>(digit_matrices.size()) != base)
    throw FormatError("expected " + std::to_string(base) + " digit matrices, got " +
                      std::to_string(digit_matrices.size()));
  for (const auto& m : digit_matrices)
    if (m.rows() != static_cast<std::size_t>(dim) ||
        m.cols() != static_cast<std::size_t>(dim))
      throw FormatError("digit matrix shape mismatch");
  if (terminal.size() != static_cast<std::size_t>(dim))
    throw FormatError("terminal vector length mismatch");
  if (selector.size() != static_cast<std::size_t>(dim))
    throw FormatError("selector length mismatch");
}

RatMat LinearRepresentation::matrix_sum() const {
  RatMat b(dim, dim);
  for (const auto& m : digit_matrices) b = b + m;
  return b;
}

std::vector<int> digits(std::uint64_t m, int base) {
  if (base < 2) throw FormatError("invalid base: k must be >= 2");
  std::vector<int> out;
  while (m > 0) {
    out.push_back(static_cast<int>(m % static_cast<std::uint64_t>(base)));
    m /= static_cast<std::uint64_t>(base);
  }
  return out;
}

std::uint64_t digit_value(const std::vector<int>& d, int base) {
  std::uint64_t value = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it)
    value = value * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(*it);
  return value;
}

Vec state_vector(const LinearRepresentation& rep, std::uint64_t m) {
  Vec v = rep.terminal;
  std::vector<int> d = digits(m, rep.base);
  for (auto it = d.rbegin(); it != d.rend(); ++it) v = rep.digit(*it).apply(v);
  return v;
}

Rational evaluate(const LinearRepresentation& rep, std::uint64_t m) {
  return dot(rep.selector, state_vector(rep, m));
}

LinearRepresentation conjugate(const LinearRepresentation& rep, const RatMat& t) {
  auto inv = t.inverse();
  if (!inv) throw FormatError("conjugation matrix is not invertible");
  LinearRepresentation out = rep;
  for (auto& m : out.digit_matrices) m = t * m * *inv;
  out.terminal = t.apply(rep.terminal);
  out.selector = inv->apply_left(rep.selector);
  return out;
}

namespace {

/// Extends the representation by one coordinate so that B_0 w = w. The extra
/// coordinate flags "only leading zeros seen so far"; any nonzero digit
/// converts it into the freshly seeded state B_a w. Evaluation is unchanged,
/// and leading-zero padding of the digit string becomes harmless, which the
/// block products of lift_base rely on.
LinearRepresentation zero_consistent(const LinearRepresentation& rep) {
  const int d = rep.dim;
  LinearRepresentation out;
  out.base = rep.base;
  out.dim = d + 1;
  out.name = rep.name;
  for (int a = 0; a < rep.base; ++a) {
    RatMat c(d + 1, d + 1);
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l) c(i, l) = rep.digit(a)(i, l);
    if (a == 0) {
      c(d, d) = 1;
    } else {
      Vec seeded = rep.digit(a).apply(rep.terminal);
      for (int i = 0; i < d; ++i) c(i, d) = seeded[i];
    }
    out.digit_matrices.push_back(std::move(c));
  }
  out.terminal.assign(d + 1, Rational(0));
  out.terminal[d] = 1;
  out.selector = rep.selector;
  out.selector.push_back(dot(rep.selector, rep.terminal));
  return out;
}

}  // namespace

LinearRepresentation lift_base(const LinearRepresentation& rep, int j) {
  if (j < 1) throw FormatError("lift exponent must be >= 1");
  if (j == 1) return rep;
  if (rep.digit(0).apply(rep.terminal) != rep.terminal)
    return lift_base(zero_consistent(rep), j);
  std::uint64_t new_base = 1;
  for (int t = 0; t < j; ++t) {
    new_base *= static_cast<std::uint64_t>(rep.base);
    if (new_base > (1ULL << 20))
      throw GuardError("lifted base too large");
  }
  LinearRepresentation out = rep;
  out.base = static_cast<int>(new_base);
  out.digit_matrices.clear();
  out.digit_matrices.reserve(new_base);
  for (std::uint64_t a = 0; a < new_base; ++a) {
    RatMat prod = RatMat::identity(rep.dim);
    std::uint64_t rest = a;
    for (int t = 0; t < j; ++t) {
      prod = prod * rep.digit(static_cast<int>(rest % rep.base));
      rest /= static_cast<std::uint64_t>(rep.base);
    }
    out.digit_matrices.push_back(std::move(prod));
  }
  if (!out.name.empty()) out.name += "_lift" + std::to_string(j);
  return out;
}

LinearRepresentation transpose_rep(const LinearRepresentation& rep) {
  LinearRepresentation out = rep;
  for (auto& m : out.digit_matrices) m = m.transpose();
  out.terminal = rep.selector;
  out.selector = rep.terminal;
  return out;
}

namespace {

RatMat mat2(Rational a, Rational b, Rational c, Rational d) {
  return RatMat(2, 2, {a, b, c, d});
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"stern", "josephus", "dumas",
                                                 "sumdigits", "one"};
  return names;
}

LinearRepresentation builtin(const std::string& name) {
  LinearRepresentation rep;
  rep.name = name;
  if (name == "stern") {
    rep.base = 2;
    rep.dim = 2;
    rep.digit_matrices = {mat2(1, 0, 1, 1), mat2(1, 1, 0, 1)};
    rep.terminal = {0, 1};
    rep.selector = {1, 0};
  } else if (name == "josephus") {
    rep.base = 2;
    rep.dim = 2;
    rep.digit_matrices = {mat2(2, -1, 0, 1), mat2(2, 1, 0, 1)};
    rep.terminal = {0, 1};
    rep.selector = {1, 0};
  } else if (name == "dumas") {
    rep.base = 2;
    rep.dim = 2;
    rep.digit_matrices = {RatMat::identity(2), mat2(3, -3, 3, 3)};
    rep.terminal = {1, 0};
    rep.selector = {1, 0};
  } else if (name == "sumdigits") {
    rep.base = 2;
    rep.dim = 2;
    rep.digit_matrices = {RatMat::identity(2), mat2(1, 1, 0, 1)};
    rep.terminal = {0, 1};
    rep.selector = {1, 0};
  } else if (name == "one") {
    rep.base = 2;
    rep.dim = 1;
    rep.digit_matrices = {RatMat(1, 1, {Rational(1)}), RatMat(1, 1, {Rational(1)})};
    rep.terminal = {1};
    rep.selector = {1};
  } else {
    throw FormatError("unknown builtin representation '" + name + "'");
  }
  rep.validate();
  return rep;
}

namespace {

using nlohmann::json;

Rational entry_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw FormatError("matrix entries must be integers or \"p/q\" strings");
}

json entry_to_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p())
    return json(q.get_num().get_si());
  return json(rational_string(q));
}

Vec vec_from_json(const json& j) {
  Vec v;
  for (const auto& e : j) v.push_back(entry_from_json(e));
  return v;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(entry_to_json(q));
  return out;
}

}  // namespace

LinearRepresentation representation_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid representation JSON: ") + e.what());
  }
  LinearRepresentation rep;
  try {
    rep.name = j.value("name", std::string());
    rep.base = j.at("k").get<int>();
    rep.dim = j.at("dim").get<int>();
    for (const auto& m : j.at("matrices")) {
      Vec entries = vec_from_json(m);
      if (entries.size() != static_cast<std::size_t>(rep.dim) * rep.dim)
        throw FormatError("digit matrix shape mismatch");
      rep.digit_matrices.emplace_back(rep.dim, rep.dim, std::move(entries));
    }
    rep.terminal = vec_from_json(j.at("terminal"));
    if (j.contains("selector")) {
      rep.selector = vec_from_json(j.at("selector"));
    } else {
      rep.selector.assign(rep.dim, Rational(0));
      rep.selector[0] = 1;
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid representation JSON: ") + e.what());
  }
  rep.validate();
  return rep;
}

std::string representation_to_json(const LinearRepresentation& rep) {
  json j;
  j["name"] = rep.name;
  j["k"] = rep.base;
  j["dim"] = rep.dim;
  json mats = json::array();
  for (const auto& m : rep.digit_matrices) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t c = 0; c < m.cols(); ++c) rows.push_back(entry_to_json(m(i, c)));
    mats.push_back(rows);
  }
  j["matrices"] = mats;
  j["terminal"] = vec_to_json(rep.terminal);
  j["selector"] = vec_to_json(rep.selector);
  return j.dump(2) + "\n";
}

LinearRepresentation load_representation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open representation file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return representation_from_json(buf.str());
}

void save_representation(const LinearRepresentation& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write representation file '" + path + "'");
  out << representation_to_json(rep);
}

}  // namespace regmeas
