#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "pfpath/polynomial.hpp"
#include "pfpath/unipoly.hpp"

namespace pfpath {

struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Element of Q(t): numerator/denominator in lowest terms, denominator monic.
class RationalFunction {
public:
  RationalFunction() : num_(), den_(UniPoly(Rational(1))) {}
  RationalFunction(long n) : num_(UniPoly(Rational(n))), den_(UniPoly(Rational(1))) {}
  explicit RationalFunction(Rational q) : num_(UniPoly(std::move(q))), den_(UniPoly(Rational(1))) {}
  explicit RationalFunction(UniPoly p) : num_(std::move(p)), den_(UniPoly(Rational(1))) {}
  RationalFunction(UniPoly num, UniPoly den);

  static RationalFunction t() { return RationalFunction(UniPoly::t()); }

  const UniPoly& num() const { return num_; }
  const UniPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { a += b; return a; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { a -= b; return a; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { a *= b; return a; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { a /= b; return a; }
  friend RationalFunction operator-(const RationalFunction& a);

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  RationalFunction inverse() const;
  RationalFunction derivative() const;

  /// Throws PoleError when t0 is a root of the denominator.
  Rational evaluate(const Rational& t0) const;

  std::string to_string() const;

private:
  void normalize();
  UniPoly num_, den_;
};

using TPolynomial = Polynomial<RationalFunction>;

/// Coefficientwise evaluation at t = t0. On a pole, reports the offending
/// monomial in the error message.
QPolynomial evaluate_t(const TPolynomial& p, const Rational& t0);

/// The pencil member (1-t)*f + t*g as a polynomial over Q(t).
TPolynomial pencil_member(const QPolynomial& f, const QPolynomial& g);

}  // namespace pfpath
