#include "regmeas/rational.hpp"

#include <cctype>

#include "regmeas/errors.hpp"

namespace regmeas {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw FormatError("empty rational literal");
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') ++i;
  bool seen_digit = false;
  bool seen_slash = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
    } else if (c == '/' && !seen_slash && seen_digit) {
      seen_slash = true;
      seen_digit = false;
    } else {
      throw FormatError("invalid rational literal '" + text +
                        "' (floats are not accepted; use p/q)");
    }
  }
  if (!seen_digit) throw FormatError("invalid rational literal '" + text + "'");
  Rational q;
  if (q.set_str(text, 10) != 0)
    throw FormatError("invalid rational literal '" + text + "'");
  if (q.get_den() == 0)
    throw FormatError("zero denominator in rational literal '" + text + "'");
  q.canonicalize();
  return q;
}

std::string rational_string(const Rational& value) {
  Rational canonical = value;
  canonical.canonicalize();
  return canonical.get_str();
}

}  // namespace regmeas
