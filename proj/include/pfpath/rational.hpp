#pragma once

#include <cmath>
#include <iosfwd>
#include <ostream>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>
#include <Eigen/Core>

namespace pfpath {

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Thin value wrapper around GMP's mpq_class; avoids the
/// expression-template surprises of using mpq_class directly in generic code.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

  /// Parses "a", "-a" or "a/b". Round-trips with to_string().
  static Rational from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw std::invalid_argument("Rational: cannot parse '" + s + "'");
    q.canonicalize();
    return Rational(std::move(q));
  }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    return Rational(mpq_class(1) / v_);
  }

  std::string to_string() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_str();
  }

  double to_double() const { return v_.get_d(); }

private:
  mpq_class v_;
};

inline Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

inline std::ostream& operator<<(std::ostream& os, const Rational& q) {
  return os << q.to_string();
}

/// log of a nonzero big integer's absolute value, stable for huge operands.
inline double log_abs(const mpz_class& z) {
  signed long exp2;
  double d = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::fabs(d)) + static_cast<double>(exp2) * std::log(2.0);
}

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

}  // namespace pfpath

namespace Eigen {
template <>
struct NumTraits<pfpath::Rational> : GenericNumTraits<pfpath::Rational> {
  typedef pfpath::Rational Real;
  typedef pfpath::Rational NonInteger;
  typedef pfpath::Rational Nested;
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 60,
    MulCost = 60
  };
};
}  // namespace Eigen
