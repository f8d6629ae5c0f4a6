#include <doctest.h>

#include <random>

#include "pfpath/polynomial.hpp"
#include "pfpath/ratfun.hpp"

using namespace pfpath;

namespace {

// Definitional grevlex comparison, kept deliberately naive and separate from
// the library implementation: compare total degrees, then scan the exponent
// difference for its last nonzero entry.
int definitional_compare(const Monomial& a, const Monomial& b) {
  int da = 0, db = 0;
  for (int i = 0; i < kNumVars; ++i) {
    da += a.e[i];
    db += b.e[i];
  }
  if (da != db) return da < db ? -1 : 1;
  int last = 0;
  for (int i = 0; i < kNumVars; ++i)
    if (a.e[i] != b.e[i]) last = static_cast<int>(a.e[i]) - static_cast<int>(b.e[i]);
  if (last == 0) return 0;
  return last < 0 ? 1 : -1;  // negative last nonzero difference = larger
}

std::vector<Monomial> all_monomials_up_to(int dmax) {
  std::vector<Monomial> out;
  for (int a = 0; a <= dmax; ++a)
    for (int b = 0; a + b <= dmax; ++b)
      for (int c = 0; a + b + c <= dmax; ++c)
        for (int d = 0; a + b + c + d <= dmax; ++d)
          out.push_back(Monomial({static_cast<uint16_t>(a), static_cast<uint16_t>(b),
                                  static_cast<uint16_t>(c), static_cast<uint16_t>(d)}));
  return out;
}

QPolynomial random_poly(std::mt19937& rng, int max_terms = 6, bool homogeneous4 = false) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> expo(0, 4);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::vector<QPolynomial::Term> ts;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    std::array<uint16_t, 4> e{};
    if (homogeneous4) {
      int left = 4;
      for (int i = 0; i < 3; ++i) {
        std::uniform_int_distribution<int> d(0, left);
        e[i] = static_cast<uint16_t>(d(rng));
        left -= e[i];
      }
      e[3] = static_cast<uint16_t>(left);
    } else {
      for (int i = 0; i < 4; ++i) e[i] = static_cast<uint16_t>(expo(rng) % 3);
    }
    int c = coef(rng);
    if (c == 0) c = 1;
    ts.push_back({Monomial(e), Rational(c)});
  }
  return QPolynomial::from_terms(std::move(ts));
}

const char* kFermat = "x^4 + y^4 + z^4 + w^4";

RationalMatrix identity4() {
  RationalMatrix u(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) u(i, j) = Rational(i == j ? 1 : 0);
  return u;
}

}  // namespace

TEST_CASE("rational canonical form and parsing") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(0, 5) == Rational(0));
  CHECK(Rational::from_string("6/4").to_string() == "3/2");
  CHECK(Rational::from_string("-7").to_string() == "-7");
  CHECK(Rational::from_string("3/2") + Rational::from_string("1/2") == Rational(2));
  CHECK_THROWS(Rational(1, 0));
  CHECK((Rational(1, 3) * Rational(3)) == Rational(1));
}

TEST_CASE("grevlex examples") {
  Monomial x2({2, 0, 0, 0}), xy({1, 1, 0, 0}), x4({4, 0, 0, 0});
  CHECK(grevlex_compare(x2, xy) == Ordering::Greater);
  CHECK(grevlex_compare(x4, x4) == Ordering::Equal);
  // x > y > z > w
  CHECK(grevlex_greater(Monomial::var(0), Monomial::var(1)));
  CHECK(grevlex_greater(Monomial::var(1), Monomial::var(2)));
  CHECK(grevlex_greater(Monomial::var(2), Monomial::var(3)));
}

TEST_CASE("grevlex full degree-4 sort matches the definitional oracle") {
  // Generate in a different (lex-nested) order, insertion-sort with the
  // definitional comparator, and compare against the library's ordering.
  std::vector<Monomial> lex;
  for (const Monomial& m : all_monomials_up_to(4))
    if (m.deg == 4) lex.push_back(m);
  REQUIRE(lex.size() == 35);
  std::vector<Monomial> sorted;
  for (const Monomial& m : lex) {  // insertion sort, descending
    auto it = sorted.begin();
    while (it != sorted.end() && definitional_compare(*it, m) > 0) ++it;
    sorted.insert(it, m);
  }
  std::vector<Monomial> lib = monomials_of_degree(4);
  REQUIRE(lib.size() == 35);
  for (size_t i = 0; i < 35; ++i) CHECK(lib[i] == sorted[i]);
}

TEST_CASE("grevlex is a strict total order on degree <= 4 monomials") {
  std::vector<Monomial> ms = all_monomials_up_to(4);
  for (const auto& a : ms)
    for (const auto& b : ms) {
      Ordering ab = grevlex_compare(a, b), ba = grevlex_compare(b, a);
      if (ab == Ordering::Equal) {
        CHECK(a == b);
        CHECK(ba == Ordering::Equal);
      } else {
        CHECK(ab != ba);  // antisymmetry
      }
    }
  // transitivity on the greater relation
  std::mt19937 rng(7);
  std::uniform_int_distribution<size_t> pick(0, ms.size() - 1);
  for (int trial = 0; trial < 20000; ++trial) {
    const Monomial &a = ms[pick(rng)], &b = ms[pick(rng)], &c = ms[pick(rng)];
    if (grevlex_greater(a, b) && grevlex_greater(b, c)) CHECK(grevlex_greater(a, c));
  }
}

TEST_CASE("arithmetic examples") {
  QPolynomial fermat = parse_polynomial(kFermat);
  CHECK(to_string(fermat.partial_derivative(0)) == "4*x^3");
  QPolynomial xpy = parse_polynomial("x + y"), xmy = parse_polynomial("x - y");
  CHECK(to_string(xpy * xmy) == "x^2 - y^2");
}

TEST_CASE("arithmetic properties on random samples") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    QPolynomial p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
    CHECK((p + q) - q == p);
    CHECK(p + q == q + p);
    CHECK((p + q) * r == p * r + q * r);  // distributivity
    CHECK((p * q) * r == p * (q * r));    // associativity
  }
}

TEST_CASE("canonical form idempotence") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    QPolynomial p = random_poly(rng);
    std::vector<QPolynomial::Term> ts(p.terms().begin(), p.terms().end());
    CHECK(QPolynomial::from_terms(std::move(ts)) == p);
  }
}

TEST_CASE("substitute_linear examples") {
  QPolynomial fermat = parse_polynomial(kFermat);
  CHECK(substitute_linear(identity4(), fermat) == fermat);

  RationalMatrix swap_xy = identity4();
  swap_xy(0, 0) = Rational(0), swap_xy(1, 1) = Rational(0);
  swap_xy(0, 1) = Rational(1), swap_xy(1, 0) = Rational(1);
  CHECK(substitute_linear(swap_xy, fermat) == fermat);

  RationalMatrix diag2 = identity4();
  diag2(0, 0) = Rational(2);
  CHECK(to_string(substitute_linear(diag2, parse_polynomial("x^4"))) == "16*x^4");

  RationalMatrix singular = identity4();
  singular(3, 3) = Rational(0);
  CHECK_THROWS_AS(substitute_linear(singular, fermat), std::domain_error);
}

TEST_CASE("substitute_linear group action laws") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> entry(-2, 2);
  auto random_invertible = [&]() {
    while (true) {
      RationalMatrix u(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) u(i, j) = Rational(entry(rng));
      if (!determinant(u).is_zero()) return u;
    }
  };
  for (int trial = 0; trial < 10; ++trial) {
    RationalMatrix u1 = random_invertible(), u2 = random_invertible();
    QPolynomial f = random_poly(rng, 4, /*homogeneous4=*/true);
    if (f.is_zero()) continue;
    CHECK(substitute_linear(u1, substitute_linear(u2, f)) == substitute_linear(u1 * u2, f));
    CHECK(substitute_linear(identity4(), f) == f);
    auto deg = substitute_linear(u1, f).homogeneous_degree();
    CHECK(deg == f.homogeneous_degree());
  }
}

TEST_CASE("pencil evaluation at rational points") {
  QPolynomial f = parse_polynomial(kFermat);
  QPolynomial g = parse_polynomial("x^3*y + y^4 + z^4 + w^4");
  TPolynomial ft = pencil_member(f, g);
  CHECK(evaluate_t(ft, Rational(0)) == f);
  CHECK(evaluate_t(ft, Rational(1)) == g);
  QPolynomial mid = evaluate_t(ft, Rational(1, 2));
  CHECK(mid * Rational(2) == f + g);
}

TEST_CASE("evaluate_t reports the offending coefficient on a pole") {
  // coefficient 1/t on x^4
  RationalFunction inv_t = RationalFunction(1) / RationalFunction::t();
  TPolynomial p = TPolynomial::monomial(Monomial({4, 0, 0, 0}), inv_t);
  CHECK_THROWS_WITH_AS(evaluate_t(p, Rational(0)), doctest::Contains("x^4"), PoleError);
  CHECK(evaluate_t(p, Rational(2)) == QPolynomial::monomial(Monomial({4, 0, 0, 0}), Rational(1, 2)));
}

TEST_CASE("polynomial text round-trip") {
  const std::string example = "x^3*y + y^3*z + z^3*w + x*w^3";
  QPolynomial p = parse_polynomial(example);
  CHECK(to_string(p) == example);
  CHECK(parse_polynomial(to_string(p)) == p);

  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    QPolynomial q = random_poly(rng);
    CHECK(parse_polynomial(to_string(q)) == q);
  }
  CHECK(to_string(QPolynomial::zero()) == "0");
  CHECK(parse_polynomial("0") == QPolynomial::zero());
  CHECK(parse_polynomial("3/2*x^2*y^2 - z*w") ==
        parse_polynomial("-1*z*w + 3/2*x^2*y^2"));
}

TEST_CASE("parser reports positions") {
  try {
    parse_polynomial("x^2 + $");
    FAIL("expected parse error");
  } catch (const PolynomialParseError& e) {
    CHECK(e.position == 6);
  }
  CHECK_THROWS_AS(parse_polynomial(""), PolynomialParseError);
  CHECK_THROWS_AS(parse_polynomial("x + "), PolynomialParseError);
  CHECK_THROWS_AS(parse_polynomial("x y"), PolynomialParseError);
}

TEST_CASE("univariate polynomials: division, gcd, derivative") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> coef(-4, 4);
  auto random_uni = [&](int dmax) {
    std::vector<Rational> cs;
    std::uniform_int_distribution<int> dd(0, dmax);
    int d = dd(rng);
    for (int i = 0; i <= d; ++i) cs.push_back(Rational(coef(rng)));
    return UniPoly(std::move(cs));
  };
  for (int trial = 0; trial < 200; ++trial) {
    UniPoly a = random_uni(6), b = random_uni(4);
    if (b.is_zero()) continue;
    auto [q, r] = UniPoly::divrem(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());

    UniPoly g = gcd(a, b);
    if (!a.is_zero()) {
      CHECK(UniPoly::divrem(a, g).second.is_zero());
      CHECK(UniPoly::divrem(b, g).second.is_zero());
      if (g.degree() > 0) CHECK(g.leading() == Rational(1));
    }
  }
  UniPoly t = UniPoly::t();
  UniPoly p = t * t * t - t;  // t^3 - t
  CHECK(p.derivative().to_string() == "3*t^2 - 1");
  CHECK(p.evaluate(Rational(2)) == Rational(6));
  CHECK(gcd(p, t).to_string() == "t");
}

TEST_CASE("rational functions stay reduced with monic denominators") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> coef(-3, 3);
  auto random_uni = [&](int dmax) {
    std::vector<Rational> cs;
    std::uniform_int_distribution<int> dd(0, dmax);
    int d = dd(rng);
    for (int i = 0; i <= d; ++i) cs.push_back(Rational(coef(rng)));
    return UniPoly(std::move(cs));
  };
  for (int trial = 0; trial < 100; ++trial) {
    UniPoly n1 = random_uni(4), d1 = random_uni(3), n2 = random_uni(4), d2 = random_uni(3);
    if (d1.is_zero() || d2.is_zero()) continue;
    RationalFunction a(n1, d1), b(n2, d2);
    for (const RationalFunction& x : {a + b, a * b, a - b}) {
      if (x.is_zero()) {
        CHECK(x.den().is_one());
        continue;
      }
      CHECK(x.den().leading() == Rational(1));
      CHECK(gcd(x.num(), x.den()).degree() == 0);
    }
    // derivative matches the quotient rule assembled by hand
    RationalFunction da = a.derivative();
    RationalFunction by_hand(a.num().derivative() * a.den() - a.num() * a.den().derivative(),
                             a.den() * a.den());
    CHECK(da == by_hand);
  }
  RationalFunction t = RationalFunction::t();
  RationalFunction r = (t * t - RationalFunction(1)) / (t - RationalFunction(1));
  CHECK(r == t + RationalFunction(1));  // cancellation
  CHECK(r.evaluate(Rational(3)) == Rational(4));
}
