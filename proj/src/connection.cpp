#include "pfpath/connection.hpp"

namespace pfpath {

Pencil Pencil::make(QPolynomial f, QPolynomial g) {
  for (const QPolynomial* p : {&f, &g}) {
    if (p->is_zero() || p->homogeneous_degree() != 4)
      throw std::invalid_argument("Pencil: endpoints must be homogeneous quartics");
    if (!is_smooth(*p)) throw NotSmoothError("Pencil: endpoint is singular: " + to_string(*p));
  }
  return Pencil{std::move(f), std::move(g)};
}

ConnectionMatrix gm_connection_at(const Pencil& e, const Rational& t0, CostMeter* meter,
                                  std::mt19937* rng, RingCache* cache) {
  QPolynomial fiber = e.member_at(t0);
  std::shared_ptr<const JacobianRing<Rational>> shared;
  std::unique_ptr<JacobianRing<Rational>> local;
  const JacobianRing<Rational>* ring_ptr;
  if (cache) {
    shared = cache->get(fiber);
    ring_ptr = shared.get();
  } else {
    local = std::make_unique<JacobianRing<Rational>>(fiber, /*with_cofactors=*/true, meter);
    ring_ptr = local.get();
  }
  const JacobianRing<Rational>& ring = *ring_ptr;
  if (!ring.smooth())
    throw SingularMemberError("gm_connection_at: singular member at t = " + t0.to_string(),
                              detail::gb_certificate(ring.gb()));
  const GriffithsBasis& basis = ring.griffiths_basis();
  const QPolynomial dir = e.direction();

  ConnectionMatrix out;
  out.t0 = t0;
  out.f_str = to_string(e.f);
  out.g_str = to_string(e.g);
  const auto m0 = static_cast<Eigen::Index>(basis.m0());
  out.entries.resize(m0, m0);
  for (Eigen::Index i = 0; i < m0; ++i) {
    const auto& row = basis.rows[static_cast<size_t>(i)];
    // d/dt (p_i / f_t^k) = -k p_i (g - f) / f_t^(k+1)
    PoleForm<Rational> form;
    form.numerator = QPolynomial::monomial(row.p, Rational(-row.pole_order)) * dir;
    form.pole_order = row.pole_order + 1;
    std::vector<Rational> coords = griffiths_dwork_reduce(form, ring, meter, rng);
    for (Eigen::Index j = 0; j < m0; ++j) out.entries(i, j) = coords[static_cast<size_t>(j)];
  }
  return out;
}

TranslateMatrix translate_matrix(const RationalMatrix& u, const QPolynomial& f, CostMeter* meter) {
  QPolynomial g = substitute_linear(u, f);  // rejects singular u
  JacobianRing<Rational> ring_f(f, /*with_cofactors=*/false, meter);
  if (!ring_f.smooth()) throw NotSmoothError("translate_matrix: f is singular");
  JacobianRing<Rational> ring_g(g, /*with_cofactors=*/true, meter);
  if (!ring_g.smooth())
    throw NotSmoothError("translate_matrix: u . f is singular (cannot happen for invertible u)");

  const GriffithsBasis& basis_f = ring_f.griffiths_basis();
  const auto m0 = static_cast<Eigen::Index>(basis_f.m0());
  TranslateMatrix out;
  out.u = u;
  out.f_str = to_string(f);
  out.n.resize(m0, m0);
  for (Eigen::Index i = 0; i < m0; ++i) {
    const auto& row = basis_f.rows[static_cast<size_t>(i)];
    PoleForm<Rational> form;
    form.numerator = substitute_linear(u, QPolynomial::monomial(row.p));
    form.pole_order = row.pole_order;
    std::vector<Rational> coords = griffiths_dwork_reduce(form, ring_g, meter);
    for (Eigen::Index j = 0; j < m0; ++j) out.n(i, j) = coords[static_cast<size_t>(j)];
  }
  if (determinant(out.n).is_zero())
    throw std::logic_error("translate_matrix: N came out singular");
  return out;
}

std::shared_ptr<const JacobianRing<Rational>> RingCache::get(const QPolynomial& f) {
  const std::string key = to_string(f);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  auto ring = std::make_shared<JacobianRing<Rational>>(f);
  ring->warm_up();
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = map_.emplace(key, std::move(ring));
  return it->second;
}

}  // namespace pfpath
