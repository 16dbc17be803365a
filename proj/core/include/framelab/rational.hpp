#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace framelab {

/// Exact rational scalar. Always canonical: lowest terms, positive denominator.
using Rat = mpq_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses "p/q" or a decimal integer string into a canonical rational.
/// Rejects empty strings, stray characters, and zero denominators.
inline Rat parse_rational(const std::string& s) {
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_int(s)) throw ParseError("malformed scalar: \"" + s + "\"");
    return Rat(mpz_class(s, 10));
  }
  const std::string num = s.substr(0, slash);
  const std::string den = s.substr(slash + 1);
  if (!is_int(num) || !is_int(den))
    throw ParseError("malformed scalar: \"" + s + "\"");
  mpz_class q(den, 10);
  if (q == 0) throw ParseError("ZeroDenominator: \"" + s + "\"");
  Rat r(mpz_class(num, 10), q);
  r.canonicalize();
  return r;
}

/// Canonical string form: "p" when integral, "p/q" otherwise.
inline std::string to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double to_double(const Rat& r) { return r.get_d(); }

}  // namespace framelab
