#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pfpath/rational.hpp"

namespace pfpath {

/// Dense univariate polynomial in t over Q. Coefficients ascending by power,
/// trailing zeros trimmed (zero polynomial has no coefficients).
class UniPoly {
public:
  UniPoly() = default;
  explicit UniPoly(Rational c) {
    if (!c.is_zero()) c_.push_back(std::move(c));
  }
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly t() { return UniPoly(std::vector<Rational>{Rational(0), Rational(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == Rational(1); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : Rational(0);
  }
  const Rational& leading() const { return c_.back(); }

  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { a += b; return a; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { a -= b; return a; }
  friend UniPoly operator-(const UniPoly& a);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  UniPoly& operator*=(const UniPoly& o) { *this = *this * o; return *this; }
  UniPoly& operator*=(const Rational& c);
  friend UniPoly operator*(UniPoly a, const Rational& c) { a *= c; return a; }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

  /// Quotient and remainder of field division; divisor must be nonzero.
  static std::pair<UniPoly, UniPoly> divrem(const UniPoly& a, const UniPoly& b);

  UniPoly derivative() const;
  Rational evaluate(const Rational& t0) const;

  UniPoly monic() const;

  /// Scalar s with s*p integer-coefficient, coprime, positive leading term.
  Rational primitive_scale() const;

  std::string to_string(const std::string& var = "t") const;

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Monic gcd via an integer subresultant remainder sequence.
UniPoly gcd(const UniPoly& a, const UniPoly& b);

UniPoly lcm(const UniPoly& a, const UniPoly& b);

}  // namespace pfpath
