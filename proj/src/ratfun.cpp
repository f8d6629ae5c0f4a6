#include "pfpath/ratfun.hpp"

namespace pfpath {

RationalFunction::RationalFunction(UniPoly num, UniPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = UniPoly(Rational(1));
    return;
  }
  if (den_.degree() > 0) {
    UniPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = UniPoly::divrem(num_, g).first;
      den_ = UniPoly::divrem(den_, g).first;
    }
  }
  Rational lead = den_.leading();
  if (!(lead == Rational(1))) {
    Rational inv = lead.inverse();
    num_ *= inv;
    den_ *= inv;
  }
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  UniPoly g = gcd(den_, o.den_);
  if (g.degree() == 0) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    // coprime denominators: the sum is already reduced, only re-monic
    Rational lead = den_.leading();
    if (!(lead == Rational(1))) {
      Rational inv = lead.inverse();
      num_ *= inv;
      den_ *= inv;
    }
    if (num_.is_zero()) den_ = UniPoly(Rational(1));
    return *this;
  }
  UniPoly b1 = UniPoly::divrem(den_, g).first;
  UniPoly d1 = UniPoly::divrem(o.den_, g).first;
  num_ = num_ * d1 + o.num_ * b1;
  den_ = den_ * d1;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
  *this += -o;
  return *this;
}

RationalFunction operator-(const RationalFunction& a) {
  RationalFunction r = a;
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (is_zero() || o.is_zero()) {
    *this = RationalFunction();
    return *this;
  }
  // cross-reduce before multiplying to keep degrees down
  UniPoly a = num_, b = den_, c = o.num_, d = o.den_;
  UniPoly g1 = gcd(a, d);
  if (g1.degree() > 0) {
    a = UniPoly::divrem(a, g1).first;
    d = UniPoly::divrem(d, g1).first;
  }
  UniPoly g2 = gcd(c, b);
  if (g2.degree() > 0) {
    c = UniPoly::divrem(c, g2).first;
    b = UniPoly::divrem(b, g2).first;
  }
  num_ = a * c;
  den_ = b * d;
  Rational lead = den_.leading();
  if (!(lead == Rational(1))) {
    Rational inv = lead.inverse();
    num_ *= inv;
    den_ *= inv;
  }
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw std::domain_error("RationalFunction: division by zero");
  *this *= o.inverse();
  return *this;
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw std::domain_error("RationalFunction: inverse of zero");
  RationalFunction r;
  r.num_ = den_;
  r.den_ = num_;
  Rational lead = r.den_.leading();
  if (!(lead == Rational(1))) {
    Rational inv = lead.inverse();
    r.num_ *= inv;
    r.den_ *= inv;
  }
  return r;
}

RationalFunction RationalFunction::derivative() const {
  if (is_zero()) return RationalFunction();
  if (is_polynomial()) return RationalFunction(num_.derivative());
  UniPoly n = num_.derivative() * den_ - num_ * den_.derivative();
  return RationalFunction(std::move(n), den_ * den_);
}

Rational RationalFunction::evaluate(const Rational& t0) const {
  Rational d = den_.evaluate(t0);
  if (d.is_zero()) throw PoleError("pole at t = " + t0.to_string());
  return num_.evaluate(t0) / d;
}

std::string RationalFunction::to_string() const {
  if (is_polynomial()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

QPolynomial evaluate_t(const TPolynomial& p, const Rational& t0) {
  std::vector<QPolynomial::Term> ts;
  ts.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    Rational c;
    try {
      c = t.c.evaluate(t0);
    } catch (const PoleError&) {
      throw PoleError("coefficient of " + t.m.to_string() + " has a pole at t = " + t0.to_string());
    }
    if (!c.is_zero()) ts.push_back({t.m, c});
  }
  return QPolynomial::from_terms(std::move(ts));
}

TPolynomial pencil_member(const QPolynomial& f, const QPolynomial& g) {
  RationalFunction t = RationalFunction::t();
  RationalFunction one_minus_t = RationalFunction(1) - t;
  TPolynomial ft = f.map_coefficients<RationalFunction>(
      [&](const Rational& c) { return RationalFunction(c) * one_minus_t; });
  TPolynomial gt = g.map_coefficients<RationalFunction>(
      [&](const Rational& c) { return RationalFunction(c) * t; });
  return ft + gt;
}

}  // namespace pfpath
