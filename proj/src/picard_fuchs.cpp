#include "pfpath/picard_fuchs.hpp"

#include <unistd.h>

#include <chrono>

namespace pfpath {

namespace {

using RF = RationalFunction;
using RFVec = std::vector<RF>;

// Exact determinant of a square UniPoly matrix, Bareiss fraction-free scheme.
UniPoly bareiss_determinant(std::vector<std::vector<UniPoly>> a, CostMeter& meter) {
  const size_t n = a.size();
  if (n == 0) return UniPoly(Rational(1));
  int sign = 1;
  UniPoly prev(Rational(1));
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return UniPoly();  // singular
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        meter.tick();
        UniPoly num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        auto [q, r] = UniPoly::divrem(num, prev);
        if (!r.is_zero()) throw std::logic_error("bareiss: inexact division");
        a[i][j] = std::move(q);
      }
      a[i][k] = UniPoly();
    }
    prev = a[k][k];
  }
  UniPoly det = a[n - 1][n - 1];
  if (sign < 0) det = -det;
  return det;
}

// Joint normalization: clear denominators and remove content across all
// coefficients; make the top coefficient's leading term positive.
void normalize_operator(std::vector<UniPoly>& cs) {
  UniPoly g;
  for (const auto& c : cs) g = gcd(g, c);
  if (g.degree() > 0)
    for (auto& c : cs) {
      auto [q, r] = UniPoly::divrem(c, g);
      if (!r.is_zero()) throw std::logic_error("normalize_operator: inexact content division");
      c = std::move(q);
    }
  std::vector<Rational> all;
  for (const auto& c : cs)
    for (const auto& x : c.coeffs()) all.push_back(x);
  Rational s = UniPoly(std::move(all)).primitive_scale();
  if (s.is_zero()) return;
  if (cs.back().leading().sign() * s.sign() < 0) s = -s;
  for (auto& c : cs) c *= s;
}

}  // namespace

std::string PicardFuchsOperator::to_string() const {
  std::string out;
  for (size_t j = coefficients.size(); j-- > 0;) {
    if (coefficients[j].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coefficients[j].to_string() + ")";
    if (j > 0) out += "*D" + (j > 1 ? "^" + std::to_string(j) : std::string());
  }
  return out.empty() ? "0" : out;
}

FirstOdeResult first_ode(const Pencil& e, const Budget& budget, const std::atomic<bool>* cancel) {
  CostMeter meter(budget.wall_clock_s, budget.step_limit, cancel);
  MeterScope scope(&meter);
  FirstOdeResult res;
  try {
    TPolynomial ft = pencil_member(e.f, e.g);
    JacobianRing<RF> ring(ft, /*with_cofactors=*/true, &meter);
    if (!ring.smooth()) {
      res.status = OdeStatus::SingularFamily;
      res.elapsed_s = meter.elapsed();
      res.detail = "generic member is singular; GB leading terms: " + detail::gb_certificate(ring.gb());
      return res;
    }
    const GriffithsBasis& basis = ring.griffiths_basis();
    const size_t m0 = basis.m0();

    TPolynomial dir =
        e.direction().map_coefficients<RF>([](const Rational& c) { return RF(c); });

    auto derive = [&](const RFVec& c) -> RFVec {
      std::vector<PoleForm<RF>> forms;
      for (size_t i = 0; i < m0; ++i) {
        if (c[i].is_zero()) continue;
        const auto& row = basis.rows[i];
        RF dc = c[i].derivative();
        if (!dc.is_zero())
          forms.push_back({Polynomial<RF>::monomial(row.p, dc), row.pole_order});
        if (!dir.is_zero())
          forms.push_back({Polynomial<RF>::monomial(row.p, c[i] * RF(-row.pole_order)) * dir,
                           row.pole_order + 1});
      }
      if (forms.empty()) return RFVec(m0, RF(0));
      return griffiths_dwork_reduce(forms, ring, &meter);
    };

    // Cyclic chain with incremental echelon over Q(t) to find the minimal
    // dependence.
    std::vector<RFVec> chain;
    {
      RFVec v0(m0, RF(0));
      v0[0] = RF(1);
      chain.push_back(std::move(v0));
    }
    struct EchRow {
      size_t pivot;
      RFVec vec;  // pivot entry normalized to 1
    };
    std::vector<EchRow> ech;
    auto insert_or_dependent = [&](RFVec v) -> bool {
      for (const auto& row : ech) {
        if (v[row.pivot].is_zero()) continue;
        RF f = v[row.pivot];
        for (size_t i = 0; i < m0; ++i) {
          meter.tick();
          if (!row.vec[i].is_zero()) v[i] -= f * row.vec[i];
        }
      }
      size_t pivot = m0;
      for (size_t i = 0; i < m0; ++i)
        if (!v[i].is_zero()) {
          pivot = i;
          break;
        }
      if (pivot == m0) return true;  // linearly dependent
      RF inv = RF(1) / v[pivot];
      for (size_t i = 0; i < m0; ++i) v[i] *= inv;
      ech.push_back({pivot, std::move(v)});
      return false;
    };
    insert_or_dependent(chain[0]);

    size_t r = 0;
    for (size_t j = 1; j <= m0; ++j) {
      chain.push_back(derive(chain.back()));
      if (insert_or_dependent(chain.back())) {
        r = j;
        break;
      }
    }
    if (r == 0) throw std::logic_error("first_ode: no dependence in a 21-dimensional space");

    // Clear each chain vector to Q[t] columns.
    std::vector<UniPoly> col_scale(r + 1);
    std::vector<std::vector<UniPoly>> cols(r + 1, std::vector<UniPoly>(m0));
    for (size_t j = 0; j <= r; ++j) {
      UniPoly d(Rational(1));
      for (const RF& x : chain[j])
        if (!x.is_zero()) d = lcm(d, x.den());
      col_scale[j] = d;
      for (size_t i = 0; i < m0; ++i) {
        const RF& x = chain[j][i];
        if (x.is_zero()) continue;
        auto [q, rem] = UniPoly::divrem(d, x.den());
        if (!rem.is_zero()) throw std::logic_error("first_ode: lcm is not a common multiple");
        cols[j][i] = x.num() * q;
      }
    }

    // Kernel of the r x (r+1) pivot-row submatrix via signed maximal minors
    // (fraction-free determinants).
    std::vector<size_t> pivot_rows;
    for (size_t k = 0; k < r; ++k) pivot_rows.push_back(ech[k].pivot);
    std::vector<UniPoly> kernel(r + 1);
    for (size_t drop = 0; drop <= r; ++drop) {
      std::vector<std::vector<UniPoly>> minor(r, std::vector<UniPoly>(r));
      for (size_t i = 0; i < r; ++i) {
        size_t cj = 0;
        for (size_t j = 0; j <= r; ++j) {
          if (j == drop) continue;
          minor[i][cj++] = cols[j][pivot_rows[i]];
        }
      }
      UniPoly det = bareiss_determinant(std::move(minor), meter);
      if (drop % 2 == 1) det = -det;
      kernel[drop] = std::move(det);
    }

    // Witness check: the dependence annihilates every coordinate exactly.
    for (size_t i = 0; i < m0; ++i) {
      RF acc;
      for (size_t j = 0; j <= r; ++j)
        if (!kernel[j].is_zero() && !chain[j][i].is_zero())
          acc += RF(kernel[j]) * RF(col_scale[j]) * chain[j][i];
      if (!acc.is_zero()) throw std::logic_error("first_ode: dependence witness failed");
    }

    std::vector<UniPoly> cs(r + 1);
    for (size_t j = 0; j <= r; ++j) cs[j] = kernel[j] * col_scale[j];
    if (cs[r].is_zero()) throw std::logic_error("first_ode: top coefficient vanished");
    normalize_operator(cs);

    res.status = OdeStatus::Success;
    res.op = PicardFuchsOperator{std::move(cs)};
    res.elapsed_s = meter.elapsed();
    return res;
  } catch (const BudgetExceeded& b) {
    res.status = OdeStatus::Timeout;
    res.elapsed_s = b.elapsed_s;
    res.detail = "budget exceeded";
    return res;
  }
}

std::string host_tag() {
  char buf[256] = {0};
  if (gethostname(buf, sizeof(buf) - 1) != 0) return "unknown-host";
  return std::string(buf);
}

EdgeLabel label_edge(const Pencil& e, const Budget& budget, const std::atomic<bool>* cancel) {
  EdgeLabel lab;
  lab.edge = e.edge_id();
  lab.budget_s = budget.wall_clock_s;
  lab.host = host_tag();
  lab.timestamp_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
  try {
    FirstOdeResult r = first_ode(e, budget, cancel);
    lab.elapsed_s = r.elapsed_s;
    switch (r.status) {
      case OdeStatus::Success:
        lab.success = true;
        lab.order = r.op->order();
        lab.degree = r.op->degree();
        break;
      case OdeStatus::Timeout:
        lab.failure = "timeout";
        break;
      case OdeStatus::SingularFamily:
        lab.failure = "singular_family";
        break;
    }
  } catch (const Cancelled&) {
    throw;
  } catch (const std::exception& ex) {
    lab.failure = std::string("error: ") + ex.what();
  }
  return lab;
}

}  // namespace pfpath
