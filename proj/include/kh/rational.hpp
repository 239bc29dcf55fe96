#pragma once

#include <gmpxx.h>

#include <string>

namespace kh {

// Exact arithmetic backing for all homology computations.  GMP supplies the
// arbitrary-precision integers and canonicalized rationals (denominator > 0,
// gcd(|num|, den) = 1 after canonicalize()).
using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Int& num, const Int& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_canonical(const Rational& r) {
  if (r.get_den() <= 0) return false;
  Int g;
  mpz_gcd(g.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return r.get_num() == 0 ? r.get_den() == 1 : g == 1;
}

inline std::string to_string(const Rational& r) {
  return r.get_str();
}

inline std::string to_string(const Int& z) {
  return z.get_str();
}

}  // namespace kh
