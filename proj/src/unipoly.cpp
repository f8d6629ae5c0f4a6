#include "pfpath/unipoly.hpp"

#include "pfpath/budget.hpp"

#include <algorithm>

namespace pfpath {

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UniPoly operator-(const UniPoly& a) {
  UniPoly r = a;
  for (Rational& c : r.c_) c = -c;
  return r;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly();
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    tick_active_meter();
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return UniPoly(std::move(out));
}

UniPoly& UniPoly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    c_.clear();
    return *this;
  }
  for (Rational& x : c_) x *= c;
  return *this;
}

std::pair<UniPoly, UniPoly> UniPoly::divrem(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw std::domain_error("UniPoly: division by zero");
  UniPoly r = a;
  if (a.degree() < b.degree()) return {UniPoly(), r};
  std::vector<Rational> q(static_cast<size_t>(a.degree() - b.degree()) + 1, Rational(0));
  Rational lead_inv = b.leading().inverse();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    tick_active_meter();
    int shift = r.degree() - b.degree();
    Rational coef = r.leading() * lead_inv;
    q[static_cast<size_t>(shift)] = coef;
    for (int i = 0; i <= b.degree(); ++i)
      r.c_[static_cast<size_t>(i + shift)] -= coef * b.c_[static_cast<size_t>(i)];
    r.trim();
  }
  return {UniPoly(std::move(q)), r};
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly();
  std::vector<Rational> out(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return UniPoly(std::move(out));
}

Rational UniPoly::evaluate(const Rational& t0) const {
  Rational acc(0);
  for (size_t i = c_.size(); i-- > 0;) acc = acc * t0 + c_[i];
  return acc;
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  UniPoly r = *this;
  r *= leading().inverse();
  return r;
}

Rational UniPoly::primitive_scale() const {
  if (is_zero()) return Rational(1);
  mpz_class den_lcm(1), num_gcd(0);
  for (const Rational& c : c_) {
    if (c.is_zero()) continue;
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
    den_lcm = l;
  }
  for (const Rational& c : c_) {
    if (c.is_zero()) continue;
    mpz_class scaled = c.num() * (den_lcm / c.den());
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    num_gcd = g;
  }
  Rational s(den_lcm, num_gcd);
  if (leading().sign() < 0) s = -s;
  return s;
}

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (size_t i = c_.size(); i-- > 0;) {
    const Rational& c = c_[i];
    if (c.is_zero()) continue;
    Rational a = c;
    if (out.empty()) {
      if (a.sign() < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += a.sign() < 0 ? " - " : " + ";
      if (a.sign() < 0) a = -a;
    }
    bool unit = (a == Rational(1));
    if (i == 0) {
      out += a.to_string();
    } else {
      if (!unit) out += a.to_string() + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

namespace {

using ZPoly = std::vector<mpz_class>;  // ascending, trimmed

void ztrim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

ZPoly zprimitive(ZPoly p) {
  ztrim(p);
  if (p.empty()) return p;
  mpz_class g(0);
  for (const auto& c : p) {
    mpz_class t;
    mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    g = t;
  }
  if (p.back() < 0) g = -g;
  for (auto& c : p) c /= g;
  return p;
}

// lc(b)^(deg a - deg b + 1) * a mod b, computed in Z[t]. The multiplier count
// is normalized even when the degree drops by more than one per round, so
// the subresultant divisions downstream stay exact.
ZPoly zpseudo_rem(ZPoly a, const ZPoly& b) {
  ztrim(a);
  int db = static_cast<int>(b.size()) - 1;
  const mpz_class& lb = b.back();
  int remaining = static_cast<int>(a.size()) - 1 - db + 1;
  while (!a.empty() && static_cast<int>(a.size()) - 1 >= db) {
    tick_active_meter();
    int da = static_cast<int>(a.size()) - 1;
    mpz_class la = a.back();
    for (auto& c : a) c *= lb;
    --remaining;
    int shift = da - db;
    for (int i = 0; i <= db; ++i) a[static_cast<size_t>(i + shift)] -= la * b[static_cast<size_t>(i)];
    ztrim(a);
  }
  for (; remaining > 0; --remaining)
    for (auto& c : a) c *= lb;
  return a;
}

void zdivexact(ZPoly& p, const mpz_class& d) {
  for (auto& c : p) {
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    if (r != 0) throw std::logic_error("UniPoly gcd: inexact subresultant division");
    c = std::move(q);
  }
}

}  // namespace

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();

  auto to_z = [](const UniPoly& p) {
    Rational s = p.primitive_scale();
    ZPoly out;
    out.reserve(p.coeffs().size());
    for (const Rational& c : p.coeffs()) {
      Rational scaled = c * s;
      out.push_back(scaled.num());  // scaled has denominator 1
    }
    return out;
  };

  ZPoly A = to_z(a), B = to_z(b);
  if (A.size() < B.size()) std::swap(A, B);

  // Subresultant PRS keeps intermediate coefficients at minor-determinant size.
  mpz_class g(1), h(1);
  while (true) {
    tick_active_meter();
    int delta = static_cast<int>(A.size()) - static_cast<int>(B.size());
    ZPoly R = zpseudo_rem(A, B);
    if (R.empty()) break;
    if (R.size() == 1) {
      B = {mpz_class(1)};
      break;
    }
    A = std::move(B);
    mpz_class divisor = g;
    for (int i = 0; i < delta; ++i) divisor *= h;
    zdivexact(R, divisor);
    B = std::move(R);
    g = A.back();
    if (delta > 0) {
      // h = g^delta / h^(delta-1)
      mpz_class hp(1), hd(1), q, r;
      for (int i = 0; i < delta; ++i) hp *= g;
      for (int i = 0; i < delta - 1; ++i) hd *= h;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), hp.get_mpz_t(), hd.get_mpz_t());
      if (r != 0) throw std::logic_error("UniPoly gcd: inexact h update");
      h = std::move(q);
    }
  }
  ZPoly P = zprimitive(std::move(B));
  std::vector<Rational> out;
  out.reserve(P.size());
  for (auto& c : P) out.push_back(Rational(c, mpz_class(1)));
  return UniPoly(std::move(out)).monic();
}

UniPoly lcm(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly();
  UniPoly g = gcd(a, b);
  return (UniPoly::divrem(a, g).first * b).monic();
}

}  // namespace pfpath
