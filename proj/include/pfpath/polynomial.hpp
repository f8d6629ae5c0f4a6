#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfpath/monomial.hpp"
#include "pfpath/rational.hpp"

namespace pfpath {

/// Sparse multivariate polynomial over a coefficient field K (Rational or
/// RationalFunction). Terms are kept strictly descending in grevlex with no
/// zero coefficients; every constructor and operation restores that form.
template <class K>
class Polynomial {
public:
  struct Term {
    Monomial m;
    K c;
  };

  Polynomial() = default;

  static Polynomial zero() { return Polynomial(); }

  static Polynomial constant(K c) {
    Polynomial p;
    if (!c.is_zero()) p.terms_.push_back({Monomial::one(), std::move(c)});
    return p;
  }

  static Polynomial monomial(const Monomial& m, K c = K(1)) {
    Polynomial p;
    if (!c.is_zero()) p.terms_.push_back({m, std::move(c)});
    return p;
  }

  static Polynomial from_terms(std::vector<Term> ts) {
    Polynomial p;
    p.terms_ = std::move(ts);
    p.normalize();
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  const Monomial& leading_monomial() const { return terms_.front().m; }
  const K& leading_coeff() const { return terms_.front().c; }

  /// Total degree; grevlex is graded so the leading term carries it.
  int degree() const { return is_zero() ? -1 : terms_.front().m.deg; }

  /// Degree shared by all terms, or nullopt if inhomogeneous (zero counts
  /// as homogeneous of any degree and reports nullopt).
  std::optional<int> homogeneous_degree() const {
    if (is_zero()) return std::nullopt;
    int d = terms_.front().m.deg;
    for (const Term& t : terms_)
      if (t.m.deg != d) return std::nullopt;
    return d;
  }

  K coeff_of(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& x) { return grevlex_greater(t.m, x); });
    if (it != terms_.end() && it->m == m) return it->c;
    return K(0);
  }

  Polynomial& operator+=(const Polynomial& o) {
    *this = merged(*this, o, false);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    *this = merged(*this, o, true);
    return *this;
  }
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merged(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merged(a, b, true); }

  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r = a;
    for (Term& t : r.terms_) t.c = K(0) - t.c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    if (a.is_zero() || b.is_zero()) return r;
    for (const Term& t : a.terms_) r.add_scaled(t.c, t.m, b);
    return r;
  }

  Polynomial& operator*=(const K& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (Term& t : terms_) t.c = t.c * c;
    return *this;
  }
  friend Polynomial operator*(Polynomial a, const K& c) { a *= c; return a; }
  friend Polynomial operator*(const K& c, Polynomial a) { a *= c; return a; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].m == b.terms_[i].m) || !(a.terms_[i].c == b.terms_[i].c)) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// *this += c * m * q. The workhorse of multiplication and division.
  void add_scaled(const K& c, const Monomial& m, const Polynomial& q) {
    if (c.is_zero() || q.is_zero()) return;
    std::vector<Term> scaled;
    scaled.reserve(q.terms_.size());
    for (const Term& t : q.terms_) {
      K nc = c * t.c;
      if (!nc.is_zero()) scaled.push_back({m * t.m, std::move(nc)});
    }
    Polynomial add;
    add.terms_ = std::move(scaled);  // still sorted: m * (.) preserves grevlex order
    *this = merged(*this, add, false);
  }

  Polynomial partial_derivative(int var) const {
    std::vector<Term> ts;
    ts.reserve(terms_.size());
    for (const Term& t : terms_) {
      int p = t.m.e[static_cast<size_t>(var)];
      if (p == 0) continue;
      Monomial m = t.m;
      m.e[static_cast<size_t>(var)] = static_cast<uint16_t>(p - 1);
      m.deg = static_cast<uint16_t>(m.deg - 1);
      ts.push_back({m, t.c * K(p)});
    }
    Polynomial r;
    r.terms_ = std::move(ts);  // order preserved, but merge in case of aliasing degrees
    r.normalize();
    return r;
  }

  template <class K2, class F>
  Polynomial<K2> map_coefficients(F&& f) const {
    std::vector<typename Polynomial<K2>::Term> ts;
    ts.reserve(terms_.size());
    for (const Term& t : terms_) {
      K2 c = f(t.c);
      if (!c.is_zero()) ts.push_back({t.m, std::move(c)});
    }
    return Polynomial<K2>::from_terms(std::move(ts));
  }

  /// Sorts descending, merges duplicates, drops zeros.
  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grevlex_greater(a.m, b.m); });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (Term& t : terms_) {
      if (!out.empty() && out.back().m == t.m)
        out.back().c = out.back().c + t.c;
      else
        out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.c.is_zero(); }),
              out.end());
    terms_ = std::move(out);
  }

private:
  static Polynomial merged(const Polynomial& a, const Polynomial& b, bool subtract) {
    Polynomial r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      Ordering o = grevlex_compare(a.terms_[i].m, b.terms_[j].m);
      if (o == Ordering::Greater) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (o == Ordering::Less) {
        Term t = b.terms_[j++];
        if (subtract) t.c = K(0) - t.c;
        r.terms_.push_back(std::move(t));
      } else {
        K c = subtract ? a.terms_[i].c - b.terms_[j].c : a.terms_[i].c + b.terms_[j].c;
        if (!c.is_zero()) r.terms_.push_back({a.terms_[i].m, std::move(c)});
        ++i, ++j;
      }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) {
      Term t = b.terms_[j];
      if (subtract) t.c = K(0) - t.c;
      r.terms_.push_back(std::move(t));
    }
    return r;
  }

  std::vector<Term> terms_;
};

using QPolynomial = Polynomial<Rational>;

/// Error type carrying a position for malformed polynomial text.
struct PolynomialParseError : std::runtime_error {
  size_t position;
  PolynomialParseError(const std::string& what, size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

QPolynomial parse_polynomial(const std::string& text);
std::string to_string(const QPolynomial& p);

/// u . f = f(x * u^t), the linear substitution x_j -> sum_i u(j,i) x_i.
/// Throws std::domain_error if u is singular.
QPolynomial substitute_linear(const RationalMatrix& u, const QPolynomial& f);

Rational determinant(const RationalMatrix& m);

}  // namespace pfpath
