#pragma once

#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "pfpath/budget.hpp"
#include "pfpath/polynomial.hpp"

namespace pfpath {

/// Reduced grevlex Groebner basis with optional cofactor certificates:
/// generators[i] == sum_j cofactors[i][j] * input[j], exactly.
template <class K>
struct GroebnerBasis {
  std::vector<Polynomial<K>> generators;
  std::vector<std::vector<Polynomial<K>>> cofactors;  // empty when not tracked
  size_t input_count = 0;

  bool has_cofactors() const { return !cofactors.empty(); }

  /// Zero-dimensionality test: every variable shows up as a pure-power
  /// leading term.
  bool is_zero_dimensional() const {
    for (int v = 0; v < kNumVars; ++v) {
      bool found = false;
      for (const auto& g : generators) {
        const Monomial& m = g.leading_monomial();
        if (m.e[static_cast<size_t>(v)] == m.deg && m.deg > 0) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }
};

namespace detail {

template <class K>
struct TrackedPoly {
  Polynomial<K> p;
  std::vector<Polynomial<K>> cof;
};

template <class K>
void make_monic(TrackedPoly<K>& t) {
  const K lc = t.p.leading_coeff();
  if (lc == K(1)) return;
  K inv = K(1) / lc;
  t.p *= inv;
  for (auto& c : t.cof) c *= inv;
}

// Full normal form of t.p against basis (skipping index `skip`), updating
// cofactors along the way. Divisor choice is first-match unless rng is given.
template <class K>
void reduce_tracked(TrackedPoly<K>& t, const std::vector<TrackedPoly<K>>& basis, long skip,
                    CostMeter& meter, std::mt19937* rng = nullptr) {
  Polynomial<K> rest = t.p;  // suffix of t.p still to examine
  Polynomial<K> done;
  while (!rest.is_zero()) {
    meter.tick();
    const Monomial& lm = rest.leading_monomial();
    std::vector<size_t> hits;
    for (size_t j = 0; j < basis.size(); ++j) {
      if (static_cast<long>(j) == skip || basis[j].p.is_zero()) continue;
      if (basis[j].p.leading_monomial().divides(lm)) {
        hits.push_back(j);
        if (!rng) break;
      }
    }
    if (hits.empty()) {
      done += Polynomial<K>::monomial(lm, rest.leading_coeff());
      rest -= Polynomial<K>::monomial(lm, rest.leading_coeff());
      continue;
    }
    size_t j = hits.size() == 1 ? hits[0]
                                : hits[(*rng)() % hits.size()];
    const auto& g = basis[j];
    K factor = rest.leading_coeff() / g.p.leading_coeff();
    Monomial shift = g.p.leading_monomial().quotient_of(lm);
    rest.add_scaled(K(0) - factor, shift, g.p);
    if (!t.cof.empty())
      for (size_t i = 0; i < t.cof.size(); ++i) {
        // t.cof gains -factor * shift * g.cof
        if (!g.cof[i].is_zero()) t.cof[i].add_scaled(K(0) - factor, shift, g.cof[i]);
      }
  }
  t.p = done;
}

}  // namespace detail

/// Buchberger with the normal selection strategy (smallest lcm first) and the
/// product + chain criteria. Deterministic for a fixed generator order.
/// Throws std::invalid_argument on empty/zero input, BudgetExceeded/Cancelled
/// from the meter.
template <class K>
GroebnerBasis<K> buchberger(const std::vector<Polynomial<K>>& input, bool with_cofactors = true,
                            CostMeter* ext_meter = nullptr) {
  using TP = detail::TrackedPoly<K>;
  CostMeter local;
  CostMeter& meter = ext_meter ? *ext_meter : local;
  if (input.empty()) throw std::invalid_argument("buchberger: no generators");
  for (const auto& g : input)
    if (g.is_zero()) throw std::invalid_argument("buchberger: zero generator");

  std::vector<TP> basis;
  for (size_t i = 0; i < input.size(); ++i) {
    TP t;
    t.p = input[i];
    if (with_cofactors) {
      t.cof.assign(input.size(), Polynomial<K>());
      t.cof[i] = Polynomial<K>::constant(K(1));
    }
    detail::make_monic(t);
    basis.push_back(std::move(t));
  }

  struct Pair {
    Monomial l;
    size_t i, j;
    bool operator<(const Pair& o) const {
      Ordering ord = grevlex_compare(l, o.l);
      if (ord != Ordering::Equal) return ord == Ordering::Less;
      if (i != o.i) return i < o.i;
      return j < o.j;
    }
  };
  std::set<Pair> pending;
  auto add_pairs_for = [&](size_t j) {
    for (size_t i = 0; i < j; ++i)
      pending.insert({lcm(basis[i].p.leading_monomial(), basis[j].p.leading_monomial()), i, j});
  };
  for (size_t j = 1; j < basis.size(); ++j) add_pairs_for(j);

  auto pair_pending = [&](size_t a, size_t b) {
    if (a > b) std::swap(a, b);
    Pair key{lcm(basis[a].p.leading_monomial(), basis[b].p.leading_monomial()), a, b};
    return pending.count(key) > 0;
  };

  while (!pending.empty()) {
    Pair pr = *pending.begin();
    pending.erase(pending.begin());
    meter.tick();

    const Monomial lmi = basis[pr.i].p.leading_monomial();
    const Monomial lmj = basis[pr.j].p.leading_monomial();
    // product criterion
    if (pr.l.deg == lmi.deg + lmj.deg && pr.l == lmi * lmj) continue;
    // chain criterion
    bool chained = false;
    for (size_t k = 0; k < basis.size() && !chained; ++k) {
      if (k == pr.i || k == pr.j) continue;
      if (basis[k].p.leading_monomial().divides(pr.l) && !pair_pending(pr.i, k) &&
          !pair_pending(pr.j, k))
        chained = true;
    }
    if (chained) continue;

    // S-polynomial (both entries are monic)
    Monomial mi = lmi.quotient_of(pr.l);
    Monomial mj = lmj.quotient_of(pr.l);
    TP s;
    s.p = Polynomial<K>();
    s.p.add_scaled(K(1), mi, basis[pr.i].p);
    s.p.add_scaled(K(0) - K(1), mj, basis[pr.j].p);
    if (with_cofactors) {
      s.cof.assign(input.size(), Polynomial<K>());
      for (size_t t = 0; t < input.size(); ++t) {
        if (!basis[pr.i].cof[t].is_zero()) s.cof[t].add_scaled(K(1), mi, basis[pr.i].cof[t]);
        if (!basis[pr.j].cof[t].is_zero()) s.cof[t].add_scaled(K(0) - K(1), mj, basis[pr.j].cof[t]);
      }
    }
    detail::reduce_tracked(s, basis, -1, meter);
    if (s.p.is_zero()) continue;
    detail::make_monic(s);
    basis.push_back(std::move(s));
    add_pairs_for(basis.size() - 1);
  }

  // Minimalize: drop elements whose leading monomial another one divides.
  std::vector<bool> keep(basis.size(), true);
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size() && keep[i]; ++j) {
      if (i == j || !keep[j]) continue;
      const Monomial &a = basis[j].p.leading_monomial(), &b = basis[i].p.leading_monomial();
      if (a.divides(b) && !(a == b && j > i)) keep[i] = false;
    }
  std::vector<detail::TrackedPoly<K>> minimal;
  for (size_t i = 0; i < basis.size(); ++i)
    if (keep[i]) minimal.push_back(std::move(basis[i]));

  // Tail-reduce each element against the others for the reduced GB.
  for (size_t i = 0; i < minimal.size(); ++i) {
    detail::reduce_tracked(minimal[i], minimal, static_cast<long>(i), meter);
    detail::make_monic(minimal[i]);
  }

  std::sort(minimal.begin(), minimal.end(), [](const auto& a, const auto& b) {
    return grevlex_less(a.p.leading_monomial(), b.p.leading_monomial());
  });

  GroebnerBasis<K> out;
  out.input_count = input.size();
  for (auto& t : minimal) {
    out.generators.push_back(std::move(t.p));
    if (with_cofactors) out.cofactors.push_back(std::move(t.cof));
  }
  return out;
}

/// Remainder of multivariate division by the basis; fills `quotients`
/// (aligned with gb.generators) when requested. A seeded rng randomizes the
/// divisor choice; the remainder is independent of that choice for a GB.
template <class K>
Polynomial<K> normal_form(const Polynomial<K>& p, const GroebnerBasis<K>& gb,
                          std::vector<Polynomial<K>>* quotients = nullptr,
                          CostMeter* meter = nullptr, std::mt19937* rng = nullptr) {
  CostMeter local;
  CostMeter& m = meter ? *meter : local;
  if (quotients) quotients->assign(gb.generators.size(), Polynomial<K>());
  Polynomial<K> rest = p;
  Polynomial<K> done;
  while (!rest.is_zero()) {
    m.tick();
    const Monomial& lm = rest.leading_monomial();
    std::vector<size_t> hits;
    for (size_t j = 0; j < gb.generators.size(); ++j) {
      if (gb.generators[j].leading_monomial().divides(lm)) {
        hits.push_back(j);
        if (!rng) break;
      }
    }
    if (hits.empty()) {
      done += Polynomial<K>::monomial(lm, rest.leading_coeff());
      rest -= Polynomial<K>::monomial(lm, rest.leading_coeff());
      continue;
    }
    size_t j = hits.size() == 1 ? hits[0] : hits[(*rng)() % hits.size()];
    const Polynomial<K>& g = gb.generators[j];
    K factor = rest.leading_coeff() / g.leading_coeff();
    Monomial shift = g.leading_monomial().quotient_of(lm);
    rest.add_scaled(K(0) - factor, shift, g);
    if (quotients) (*quotients)[j] += Polynomial<K>::monomial(shift, factor);
  }
  return done;
}

}  // namespace pfpath
