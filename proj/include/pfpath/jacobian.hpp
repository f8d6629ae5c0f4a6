#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "pfpath/groebner.hpp"

namespace pfpath {

struct NotSmoothError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInIdealError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The four partials of a nonzero homogeneous form.
template <class K>
std::array<Polynomial<K>, kNumVars> jacobian_ideal(const Polynomial<K>& f) {
  if (f.is_zero()) throw std::invalid_argument("jacobian_ideal: zero polynomial");
  if (!f.homogeneous_degree()) throw std::invalid_argument("jacobian_ideal: not homogeneous");
  std::array<Polynomial<K>, kNumVars> out;
  for (int i = 0; i < kNumVars; ++i) out[static_cast<size_t>(i)] = f.partial_derivative(i);
  return out;
}

/// Griffiths basis rows for a smooth quartic surface: monomial p and pole
/// order k, ordered k ascending then grevlex descending. Degrees are 4k-4.
struct GriffithsBasis {
  struct Row {
    Monomial p;
    int pole_order;
  };
  std::vector<Row> rows;
  size_t m0() const { return rows.size(); }

  /// Index of a degree-d standard monomial's row, or -1.
  int index_of(const Monomial& m, int pole_order) const {
    for (size_t i = 0; i < rows.size(); ++i)
      if (rows[i].pole_order == pole_order && rows[i].p == m) return static_cast<int>(i);
    return -1;
  }
};

/// Jacobian ring R = K[x,y,z,w]/jac(f) of a homogeneous quartic, with the
/// data every downstream reduction needs: the grevlex GB (with cofactors),
/// graded standard monomials, and the Griffiths basis when f is smooth.
template <class K>
class JacobianRing {
public:
  explicit JacobianRing(Polynomial<K> f, bool with_cofactors = true, CostMeter* meter = nullptr)
      : f_(std::move(f)) {
    partials_ = jacobian_ideal(f_);
    std::vector<Polynomial<K>> gens;
    for (int i = 0; i < kNumVars; ++i)
      if (!partials_[static_cast<size_t>(i)].is_zero()) {
        gens.push_back(partials_[static_cast<size_t>(i)]);
        gen_index_.push_back(i);
      }
    if (gens.empty()) throw std::invalid_argument("JacobianRing: all partials vanish");
    gb_ = buchberger(gens, with_cofactors, meter);
    smooth_ = gb_.is_zero_dimensional();
  }

  const Polynomial<K>& f() const { return f_; }
  const std::array<Polynomial<K>, kNumVars>& partials() const { return partials_; }
  const GroebnerBasis<K>& gb() const { return gb_; }
  bool smooth() const { return smooth_; }

  /// Fills the lazy caches so a const instance can be shared across threads.
  void warm_up(int max_degree = 12) {
    for (int d = 0; d <= max_degree; ++d) standard_monomials(d);
    if (smooth_ && f_.degree() == 4) griffiths_basis();
  }

  /// Monomials of degree d outside lt(jac(f)), grevlex descending.
  const std::vector<Monomial>& standard_monomials(int d) const {
    auto it = std_cache_.find(d);
    if (it != std_cache_.end()) return it->second;
    std::vector<Monomial> out;
    for (const Monomial& m : monomials_of_degree(d)) {
      bool reducible = false;
      for (const auto& g : gb_.generators)
        if (g.leading_monomial().divides(m)) {
          reducible = true;
          break;
        }
      if (!reducible) out.push_back(m);
    }
    return std_cache_.emplace(d, std::move(out)).first->second;
  }

  size_t total_standard_monomials(int max_degree = 12) const {
    size_t n = 0;
    for (int d = 0; d <= max_degree; ++d) n += standard_monomials(d).size();
    return n;
  }

  /// Throws NotSmoothError on singular input. Requires a quartic.
  const GriffithsBasis& griffiths_basis() const {
    if (!basis_.rows.empty()) return basis_;
    if (!smooth_) throw NotSmoothError("griffiths_basis: jac(f) is not zero-dimensional");
    if (f_.degree() != 4) throw std::invalid_argument("griffiths_basis: quartic expected");
    for (int k = 1; k <= 3; ++k) {
      const int d = 4 * k - 4;  // (n+1-l)d - n - 2 for n=2, d=4
      for (const Monomial& m : standard_monomials(d)) basis_.rows.push_back({m, k});
    }
    return basis_;
  }

  Polynomial<K> normal_form(const Polynomial<K>& p, std::vector<Polynomial<K>>* quotients = nullptr,
                            CostMeter* meter = nullptr, std::mt19937* rng = nullptr) const {
    return pfpath::normal_form(p, gb_, quotients, meter, rng);
  }

  /// Cofactors (a_0..a_3) with p = sum a_i * partial_i(f). Requires the GB to
  /// have been built with cofactors. Throws NotInIdealError if p is not in
  /// jac(f).
  std::array<Polynomial<K>, kNumVars> express_in_ideal(const Polynomial<K>& p,
                                                       CostMeter* meter = nullptr,
                                                       std::mt19937* rng = nullptr) const {
    if (!gb_.has_cofactors())
      throw std::logic_error("express_in_ideal: GB built without cofactors");
    std::vector<Polynomial<K>> q;
    Polynomial<K> r = pfpath::normal_form(p, gb_, &q, meter, rng);
    if (!r.is_zero()) throw NotInIdealError("express_in_ideal: nonzero normal form");
    std::array<Polynomial<K>, kNumVars> out;
    for (size_t j = 0; j < gb_.generators.size(); ++j) {
      if (q[j].is_zero()) continue;
      for (size_t gi = 0; gi < gen_index_.size(); ++gi) {
        const Polynomial<K>& c = gb_.cofactors[j][gi];
        if (!c.is_zero()) out[static_cast<size_t>(gen_index_[gi])] += q[j] * c;
      }
    }
    return out;
  }

private:
  Polynomial<K> f_;
  std::array<Polynomial<K>, kNumVars> partials_;
  std::vector<int> gen_index_;  // gb input -> which partial
  GroebnerBasis<K> gb_;
  bool smooth_ = false;
  mutable std::map<int, std::vector<Monomial>> std_cache_;
  mutable GriffithsBasis basis_;
};

/// Zero-dimensionality of jac(f), decided from the grevlex GB.
template <class K>
bool is_smooth(const Polynomial<K>& f, CostMeter* meter = nullptr) {
  auto parts = jacobian_ideal(f);
  std::vector<Polynomial<K>> gens;
  for (const auto& p : parts)
    if (!p.is_zero()) gens.push_back(p);
  if (gens.empty()) return false;
  return buchberger(gens, /*with_cofactors=*/false, meter).is_zero_dimensional();
}

}  // namespace pfpath
