#include <doctest.h>

#include <gmpxx.h>

#include <map>
#include <random>

#include "pfpath/jacobian.hpp"

using namespace pfpath;

namespace {

const char* kFermat = "x^4 + y^4 + z^4 + w^4";
const char* kV4Example = "x^3*y + x*y^3 + z^3*w + w^4";

QPolynomial random_fewnomial(std::mt19937& rng, int k) {
  const auto& all = monomials_of_degree(4);
  std::vector<size_t> idx(all.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<size_t> d(static_cast<size_t>(i), idx.size() - 1);
    std::swap(idx[static_cast<size_t>(i)], idx[d(rng)]);
  }
  std::vector<QPolynomial::Term> ts;
  for (int i = 0; i < k; ++i) ts.push_back({all[idx[static_cast<size_t>(i)]], Rational(1)});
  return QPolynomial::from_terms(std::move(ts));
}

// Exact dimension of jac(f)_9 by sparse integer row reduction: rows are the
// coefficient vectors of m * df/dx_i over all degree-6 monomials m. Smooth
// quartics are exactly those with full column rank 220. No Groebner machinery
// involved.
bool smooth_by_rank_oracle(const QPolynomial& f) {
  const std::vector<Monomial> basis9 = monomials_of_degree(9);
  std::map<std::array<uint16_t, 4>, int> col_of;
  for (size_t i = 0; i < basis9.size(); ++i) col_of[basis9[i].e] = static_cast<int>(i);

  using SparseRow = std::vector<std::pair<int, mpz_class>>;  // sorted by column
  auto content_normalize = [](SparseRow& r) {
    mpz_class g(0);
    for (auto& [c, v] : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g != 0)
      for (auto& [c, v] : r) v /= g;
  };

  std::vector<SparseRow> rows;
  for (int i = 0; i < kNumVars; ++i) {
    QPolynomial di = f.partial_derivative(i);
    for (const Monomial& m : monomials_of_degree(6)) {
      SparseRow r;
      for (const auto& t : di.terms()) {
        Monomial prod = m * t.m;
        r.push_back({col_of.at(prod.e), t.c.num()});
      }
      std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      if (!r.empty()) rows.push_back(std::move(r));
    }
  }

  std::map<int, SparseRow> pivots;  // leading column -> normalized row
  auto axpy = [](const SparseRow& a, const mpz_class& ca, const SparseRow& b, const mpz_class& cb) {
    SparseRow out;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back({a[i].first, ca * a[i].second});
        ++i;
      } else if (i >= a.size() || b[j].first < a[i].first) {
        out.push_back({b[j].first, cb * b[j].second});
        ++j;
      } else {
        mpz_class v = ca * a[i].second + cb * b[j].second;
        if (v != 0) out.push_back({a[i].first, std::move(v)});
        ++i, ++j;
      }
    }
    return out;
  };

  for (SparseRow row : rows) {
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) break;
      row = axpy(row, it->second.front().second, it->second, -row.front().second);
      content_normalize(row);
    }
    if (!row.empty()) {
      content_normalize(row);
      pivots.emplace(row.front().first, std::move(row));
      if (pivots.size() == basis9.size()) return true;  // full rank already
    }
  }
  return pivots.size() == basis9.size();
}

// Coefficients of (1 + t + t^2)^4, the Hilbert series of the Jacobian ring of
// any smooth quartic (complete intersection of four cubics).
std::vector<int> hilbert_ci_cubed() {
  std::vector<int> h{1};
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<int> next(h.size() + 2, 0);
    for (size_t i = 0; i < h.size(); ++i)
      for (int j = 0; j <= 2; ++j) next[i + static_cast<size_t>(j)] += h[i];
    h = std::move(next);
  }
  return h;
}

template <class K>
void check_groebner_certificates(const std::vector<Polynomial<K>>& gens,
                                 const GroebnerBasis<K>& gb) {
  // every input reduces to zero
  for (const auto& g : gens) CHECK(normal_form(g, gb).is_zero());
  // every S-polynomial of basis pairs reduces to zero (definitional oracle)
  for (size_t i = 0; i < gb.generators.size(); ++i)
    for (size_t j = i + 1; j < gb.generators.size(); ++j) {
      const auto &gi = gb.generators[i], &gj = gb.generators[j];
      Monomial l = lcm(gi.leading_monomial(), gj.leading_monomial());
      Polynomial<K> s;
      s.add_scaled(K(1) / gi.leading_coeff(), gi.leading_monomial().quotient_of(l), gi);
      s.add_scaled(K(0) - K(1) / gj.leading_coeff(), gj.leading_monomial().quotient_of(l), gj);
      CHECK(normal_form(s, gb).is_zero());
    }
  // cofactor identity: basis element == sum of cofactors * inputs
  REQUIRE(gb.has_cofactors());
  for (size_t i = 0; i < gb.generators.size(); ++i) {
    Polynomial<K> acc;
    for (size_t j = 0; j < gens.size(); ++j) acc += gb.cofactors[i][j] * gens[j];
    CHECK(acc == gb.generators[i]);
  }
}

}  // namespace

TEST_CASE("jacobian_ideal examples") {
  auto parts = jacobian_ideal(parse_polynomial(kFermat));
  CHECK(to_string(parts[0]) == "4*x^3");
  CHECK(to_string(parts[1]) == "4*y^3");
  CHECK(to_string(parts[2]) == "4*z^3");
  CHECK(to_string(parts[3]) == "4*w^3");

  auto parts2 = jacobian_ideal(parse_polynomial(kV4Example));
  CHECK(to_string(parts2[0]) == "3*x^2*y + y^3");
  CHECK(to_string(parts2[1]) == "x^3 + 3*x*y^2");
  CHECK(to_string(parts2[2]) == "3*z^2*w");
  CHECK(to_string(parts2[3]) == "z^3 + 4*w^3");

  CHECK_THROWS_AS(jacobian_ideal(QPolynomial::zero()), std::invalid_argument);
  CHECK_THROWS_AS(jacobian_ideal(parse_polynomial("x^4 + x^3")), std::invalid_argument);
}

TEST_CASE("buchberger on a monomial ideal returns it unchanged") {
  std::vector<QPolynomial> gens;
  for (const char* s : {"x^3", "y^3", "z^3", "w^3"}) gens.push_back(parse_polynomial(s));
  auto gb = buchberger(gens);
  REQUIRE(gb.generators.size() == 4);
  CHECK(to_string(gb.generators[0]) == "w^3");
  CHECK(to_string(gb.generators[3]) == "x^3");
  check_groebner_certificates(gens, gb);
}

TEST_CASE("buchberger on the partials of the singular quartic x^4") {
  auto parts = jacobian_ideal(parse_polynomial("x^4"));
  std::vector<QPolynomial> gens;
  for (const auto& p : parts)
    if (!p.is_zero()) gens.push_back(p);
  auto gb = buchberger(gens);
  REQUIRE(gb.generators.size() == 1);
  CHECK(to_string(gb.generators[0]) == "x^3");
  CHECK(!gb.is_zero_dimensional());
}

TEST_CASE("buchberger certificates on a V4 member") {
  auto parts = jacobian_ideal(parse_polynomial(kV4Example));
  std::vector<QPolynomial> gens(parts.begin(), parts.end());
  auto gb = buchberger(gens);
  check_groebner_certificates(gens, gb);
  CHECK(gb.is_zero_dimensional());
}

TEST_CASE("buchberger output is independent of generator order") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    QPolynomial f = random_fewnomial(rng, 5);
    auto parts = jacobian_ideal(f);
    std::vector<QPolynomial> gens(parts.begin(), parts.end());
    auto gb1 = buchberger(gens, /*with_cofactors=*/false);
    std::vector<QPolynomial> shuffled = gens;
    std::swap(shuffled[0], shuffled[3]);
    std::swap(shuffled[1], shuffled[2]);
    auto gb2 = buchberger(shuffled, /*with_cofactors=*/false);
    REQUIRE(gb1.generators.size() == gb2.generators.size());
    for (size_t i = 0; i < gb1.generators.size(); ++i)
      CHECK(gb1.generators[i] == gb2.generators[i]);
  }
}

TEST_CASE("buchberger budget aborts distinctly") {
  auto parts = jacobian_ideal(parse_polynomial(kV4Example));
  std::vector<QPolynomial> gens(parts.begin(), parts.end());
  CostMeter tiny(0.0, 3);
  CHECK_THROWS_AS(buchberger(gens, true, &tiny), BudgetExceeded);
}

TEST_CASE("normal form examples and division identity") {
  JacobianRing<Rational> ring(parse_polynomial(kFermat));
  CHECK(ring.normal_form(parse_polynomial("x^3")).is_zero());
  QPolynomial x2y2 = parse_polynomial("x^2*y^2");
  CHECK(ring.normal_form(x2y2) == x2y2);

  std::mt19937 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<QPolynomial::Term> ts;
    std::uniform_int_distribution<int> coef(-3, 3);
    for (const Monomial& m : monomials_of_degree(4)) {
      int c = coef(rng);
      if (c != 0 && (rng() & 1)) ts.push_back({m, Rational(c)});
    }
    QPolynomial p = QPolynomial::from_terms(std::move(ts));
    std::vector<QPolynomial> quotients;
    QPolynomial r = ring.normal_form(p, &quotients);
    QPolynomial reconstructed = r;
    for (size_t j = 0; j < quotients.size(); ++j)
      reconstructed += quotients[j] * ring.gb().generators[j];
    CHECK(reconstructed == p);
  }
}

TEST_CASE("is_smooth examples") {
  CHECK(is_smooth(parse_polynomial(kFermat)));
  CHECK(is_smooth(parse_polynomial(kV4Example)));
  CHECK(!is_smooth(parse_polynomial("x^4 + y^4 + z^4")));
}

TEST_CASE("is_smooth agrees with the rank oracle on random fewnomials") {
  std::mt19937 rng(47);
  std::uniform_int_distribution<int> kd(4, 6);
  int smooth_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    QPolynomial f = random_fewnomial(rng, kd(rng));
    bool gb_answer = is_smooth(f);
    bool rank_answer = smooth_by_rank_oracle(f);
    CHECK(gb_answer == rank_answer);
    smooth_count += gb_answer ? 1 : 0;
  }
  CHECK(smooth_count > 0);  // the sample is not degenerate
}

TEST_CASE("standard monomial dimensions match the complete-intersection Hilbert series") {
  const std::vector<int> h = hilbert_ci_cubed();
  REQUIRE(h.size() == 9);

  JacobianRing<Rational> fermat(parse_polynomial(kFermat));
  for (int d = 0; d <= 8; ++d)
    CHECK(fermat.standard_monomials(d).size() == static_cast<size_t>(h[static_cast<size_t>(d)]));
  CHECK(fermat.standard_monomials(9).empty());
  CHECK(fermat.total_standard_monomials() == 81);

  std::mt19937 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    QPolynomial f = random_fewnomial(rng, 5);
    if (!is_smooth(f)) continue;
    JacobianRing<Rational> ring(f);
    CHECK(ring.total_standard_monomials() == 81);
    for (int d = 0; d <= 8; ++d)
      CHECK(ring.standard_monomials(d).size() == static_cast<size_t>(h[static_cast<size_t>(d)]));
  }
}

TEST_CASE("griffiths basis shape") {
  JacobianRing<Rational> fermat(parse_polynomial(kFermat));
  const GriffithsBasis& basis = fermat.griffiths_basis();
  REQUIRE(basis.m0() == 21);

  // degree-4 standard monomials of the Fermat quartic: every exponent <= 2
  int expected19 = 0;
  for (const Monomial& m : monomials_of_degree(4)) {
    bool all_le2 = true;
    for (int i = 0; i < 4; ++i) all_le2 = all_le2 && m.e[static_cast<size_t>(i)] <= 2;
    if (all_le2) ++expected19;
  }
  CHECK(expected19 == 19);

  CHECK(basis.rows[0].pole_order == 1);
  CHECK(basis.rows[0].p.is_one());
  int k2 = 0, k3 = 0;
  for (const auto& row : basis.rows) {
    if (row.pole_order == 2) ++k2;
    if (row.pole_order == 3) ++k3;
  }
  CHECK(k2 == 19);
  CHECK(k3 == 1);
  CHECK(basis.rows[20].p == Monomial({2, 2, 2, 2}));

  // rows are pairwise distinct within their degree and grevlex descending
  for (size_t i = 1; i < 20; ++i)
    if (basis.rows[i].pole_order == 2 && basis.rows[i + 1].pole_order == 2)
      CHECK(grevlex_greater(basis.rows[i].p, basis.rows[i + 1].p));

  JacobianRing<Rational> singular(parse_polynomial("x^4 + y^4 + z^4"));
  CHECK_THROWS_AS(singular.griffiths_basis(), NotSmoothError);
}

TEST_CASE("express_in_ideal examples") {
  JacobianRing<Rational> fermat(parse_polynomial(kFermat));
  auto a = fermat.express_in_ideal(parse_polynomial("4*x^3"));
  CHECK(to_string(a[0]) == "1");
  CHECK(a[1].is_zero());
  CHECK(a[2].is_zero());
  CHECK(a[3].is_zero());

  auto b = fermat.express_in_ideal(parse_polynomial("x^3 + y^3"));
  CHECK(to_string(b[0]) == "1/4");
  CHECK(to_string(b[1]) == "1/4");
  CHECK(b[2].is_zero());
  CHECK(b[3].is_zero());

  CHECK_THROWS_AS(fermat.express_in_ideal(parse_polynomial("x^2*y^2")), NotInIdealError);
}

TEST_CASE("express_in_ideal recovers a valid identity for random ideal elements") {
  std::mt19937 rng(59);
  JacobianRing<Rational> ring(parse_polynomial(kV4Example));
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    // random element sum a_i * d_i f with degree-2 cofactors
    QPolynomial p;
    for (int i = 0; i < kNumVars; ++i) {
      std::vector<QPolynomial::Term> ts;
      for (const Monomial& m : monomials_of_degree(2))
        if (rng() % 3 == 0) ts.push_back({m, Rational(coef(rng))});
      p += QPolynomial::from_terms(std::move(ts)) * ring.partials()[static_cast<size_t>(i)];
    }
    if (p.is_zero()) continue;
    auto a = ring.express_in_ideal(p);
    QPolynomial re;
    for (int i = 0; i < kNumVars; ++i) re += a[static_cast<size_t>(i)] * ring.partials()[static_cast<size_t>(i)];
    CHECK(re == p);
  }
}
