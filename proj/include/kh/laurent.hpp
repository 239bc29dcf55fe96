#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "kh/rational.hpp"

namespace kh {

// Integer-coefficient Laurent polynomial in one variable q.  Zero
// coefficients are never stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly monomial(int exp, Int coeff = 1) {
    LaurentPoly p;
    p.add_term(exp, coeff);
    return p;
  }

  // q + 1/q, the value of a single circle in the Kauffman state sum.
  static LaurentPoly circle() {
    LaurentPoly p;
    p.add_term(1, 1);
    p.add_term(-1, 1);
    return p;
  }

  void add_term(int exp, const Int& coeff) {
    if (coeff == 0) return;
    auto it = coeffs_.find(exp);
    if (it == coeffs_.end()) {
      coeffs_.emplace(exp, coeff);
    } else {
      it->second += coeff;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  LaurentPoly operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.coeffs_) r.add_term(e, c);
    return r;
  }

  LaurentPoly operator-(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.coeffs_) r.add_term(e, -c);
    return r;
  }

  LaurentPoly operator*(const LaurentPoly& o) const {
    LaurentPoly r;
    for (const auto& [e1, c1] : coeffs_)
      for (const auto& [e2, c2] : o.coeffs_) r.add_term(e1 + e2, c1 * c2);
    return r;
  }

  LaurentPoly operator-() const {
    LaurentPoly r;
    for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(e, -c);
    return r;
  }

  // Multiplication by q^m.
  LaurentPoly shifted(int m) const {
    LaurentPoly r;
    for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(e + m, c);
    return r;
  }

  // Substitution q -> -q (negates odd-exponent coefficients).
  LaurentPoly negated_variable() const {
    LaurentPoly r;
    for (const auto& [e, c] : coeffs_)
      r.coeffs_.emplace(e, (e % 2 != 0) ? Int(-c) : c);
    return r;
  }

  LaurentPoly pow(unsigned k) const {
    LaurentPoly r = monomial(0);
    for (unsigned i = 0; i < k; ++i) r = r * (*this);
    return r;
  }

  bool operator==(const LaurentPoly& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  bool is_zero() const { return coeffs_.empty(); }
  const std::map<int, Int>& coefficients() const { return coeffs_; }

  Int coefficient(int exp) const {
    auto it = coeffs_.find(exp);
    return it == coeffs_.end() ? Int(0) : it->second;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest exponent first.
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      const auto& [e, c] = *it;
      if (!first) os << (c > 0 ? " + " : " - ");
      if (first && c < 0) os << "-";
      first = false;
      Int a = abs(c);
      if (a != 1 || e == 0) os << a.get_str();
      if (e != 0) {
        if (a != 1) os << "*";
        os << "q";
        if (e != 1) os << "^" << e;
      }
    }
    return os.str();
  }

 private:
  std::map<int, Int> coeffs_;
};

}  // namespace kh
