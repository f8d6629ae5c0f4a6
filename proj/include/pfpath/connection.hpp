#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pfpath/jacobian.hpp"
#include "pfpath/ratfun.hpp"

namespace pfpath {

/// One-parameter family (1-t)f + t*g between two smooth quartics.
struct Pencil {
  QPolynomial f, g;

  /// Validates both endpoints (homogeneous quartic, smooth). f == g is fine.
  static Pencil make(QPolynomial f, QPolynomial g);
  /// Skips the smoothness checks; for callers that already know.
  static Pencil make_unchecked(QPolynomial f, QPolynomial g) { return Pencil{std::move(f), std::move(g)}; }

  QPolynomial member_at(const Rational& t0) const {
    return f * (Rational(1) - t0) + g * t0;
  }
  QPolynomial direction() const { return g - f; }
  std::string edge_id() const { return to_string(f) + " ~ " + to_string(g); }
};

/// numerator / base^pole_order * vol; deg(numerator) must be 4k-4.
template <class K>
struct PoleForm {
  Polynomial<K> numerator;
  int pole_order = 1;
};

struct SingularMemberError : std::runtime_error {
  std::string certificate;  // GB leading terms witnessing the failure
  SingularMemberError(const std::string& what, std::string cert)
      : std::runtime_error(what + "; GB leading terms: " + cert), certificate(std::move(cert)) {}
};

/// First-order Gauss-Manin matrix of a pencil at a rational basepoint.
/// Row i holds the Griffiths-basis coordinates of d/dt res(p_i / f_t^{k_i})
/// evaluated at t0, over the fiber's Jacobian ring.
struct ConnectionMatrix {
  RationalMatrix entries;
  Rational t0;
  std::string f_str, g_str;
};

/// Basis-change matrix N of a linear translate: row i holds the coordinates
/// of res(u . p_i) in the Griffiths basis of u . f.
struct TranslateMatrix {
  RationalMatrix n;
  RationalMatrix u;
  std::string f_str;
};

namespace detail {
template <class K>
std::string gb_certificate(const GroebnerBasis<K>& gb) {
  std::string cert;
  for (const auto& g : gb.generators) {
    if (!cert.empty()) cert += ", ";
    cert += g.leading_monomial().to_string();
  }
  return cert;
}
}  // namespace detail

/// Griffiths-Dwork reduction of a stack of pole forms over one smooth base,
/// yielding exact coordinates in the Griffiths basis. Splits the numerator at
/// pole order k as q = h + sum a_i d_i f and pushes (1/(k-1)) sum d_i a_i down
/// to order k-1 until order 1 is consumed.
template <class K>
std::vector<K> griffiths_dwork_reduce(const std::vector<PoleForm<K>>& forms,
                                      const JacobianRing<K>& ring, CostMeter* meter = nullptr,
                                      std::mt19937* rng = nullptr) {
  if (!ring.smooth()) throw NotSmoothError("griffiths_dwork_reduce: base is not smooth");
  const GriffithsBasis& basis = ring.griffiths_basis();

  int top = 1;
  for (const auto& fm : forms) {
    if (fm.pole_order < 1) throw std::invalid_argument("griffiths_dwork_reduce: pole order < 1");
    top = std::max(top, fm.pole_order);
  }
  std::vector<Polynomial<K>> acc(static_cast<size_t>(top) + 1);
  for (const auto& fm : forms) {
    if (!fm.numerator.is_zero() && fm.numerator.homogeneous_degree() != 4 * fm.pole_order - 4)
      throw std::invalid_argument("griffiths_dwork_reduce: numerator degree != 4k-4");
    acc[static_cast<size_t>(fm.pole_order)] += fm.numerator;
  }

  // row lookup per pole order
  std::array<std::unordered_map<Monomial, size_t>, 4> row_of;  // index by k = 1..3
  for (size_t i = 0; i < basis.rows.size(); ++i)
    row_of[static_cast<size_t>(basis.rows[i].pole_order)].emplace(basis.rows[i].p, i);

  std::vector<K> coords(basis.m0(), K(0));
  for (int k = top; k >= 1; --k) {
    Polynomial<K>& q = acc[static_cast<size_t>(k)];
    if (q.is_zero()) continue;
    if (meter) meter->tick();
    Polynomial<K> h = ring.normal_form(q, nullptr, meter, rng);
    if (!h.is_zero()) {
      if (k > 3)
        throw std::logic_error("griffiths_dwork_reduce: nonzero normal form above the top residue degree");
      for (const auto& term : h.terms()) {
        auto it = row_of[static_cast<size_t>(k)].find(term.m);
        if (it == row_of[static_cast<size_t>(k)].end())
          throw std::logic_error("griffiths_dwork_reduce: normal-form monomial is not a basis row");
        coords[it->second] = coords[it->second] + term.c;
      }
    }
    if (k == 1) continue;
    Polynomial<K> ideal_part = q - h;
    if (ideal_part.is_zero()) continue;
    auto a = ring.express_in_ideal(ideal_part, meter, rng);
    Polynomial<K> down;
    for (int i = 0; i < kNumVars; ++i) down += a[static_cast<size_t>(i)].partial_derivative(i);
    down *= K(1) / K(k - 1);
    acc[static_cast<size_t>(k - 1)] += down;
  }
  return coords;
}

template <class K>
std::vector<K> griffiths_dwork_reduce(const PoleForm<K>& form, const JacobianRing<K>& ring,
                                      CostMeter* meter = nullptr, std::mt19937* rng = nullptr) {
  return griffiths_dwork_reduce(std::vector<PoleForm<K>>{form}, ring, meter, rng);
}

class RingCache;

/// Throws SingularMemberError when the fiber at t0 is singular.
ConnectionMatrix gm_connection_at(const Pencil& e, const Rational& t0, CostMeter* meter = nullptr,
                                  std::mt19937* rng = nullptr, RingCache* cache = nullptr);

/// Throws std::domain_error on singular u, NotSmoothError on singular f.
TranslateMatrix translate_matrix(const RationalMatrix& u, const QPolynomial& f,
                                 CostMeter* meter = nullptr);

/// Read-mostly cache of warmed Jacobian rings keyed by canonical polynomial
/// string; single-writer insertion.
class RingCache {
public:
  std::shared_ptr<const JacobianRing<Rational>> get(const QPolynomial& f);

private:
  std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const JacobianRing<Rational>>> map_;
};

}  // namespace pfpath
