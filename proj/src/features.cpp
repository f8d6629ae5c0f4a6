#include "pfpath/features.hpp"

namespace pfpath {

double psi(const Rational& q) {
  if (q.is_zero()) return 0.0;
  return log_abs(q.num()) + log_abs(q.den());
}

double psi_entropy(const Rational& q) {
  if (q.is_zero()) return 0.0;
  double a = log_abs(q.num()), b = log_abs(q.den());
  return a * a + b * b;
}

MatrixStats matrix_stats(const std::vector<RationalMatrix>& channels) {
  MatrixStats s;
  for (const auto& m : channels)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double p = psi(m(i, j));
        s.sum += p;
        s.entropy -= psi_entropy(m(i, j));
        if (p != 0.0) ++s.nonzero;
      }
  return s;
}

Eigen::VectorXd edge_vector(const QPolynomial& f, const QPolynomial& g) {
  const auto& monos = quartic_monomials();
  Eigen::VectorXd v(2 * static_cast<Eigen::Index>(monos.size()));
  for (size_t i = 0; i < monos.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = f.coeff_of(monos[i]).to_double();
    v(static_cast<Eigen::Index>(i + monos.size())) = g.coeff_of(monos[i]).to_double();
  }
  return v;
}

std::vector<Eigen::MatrixXd> psi_channels(const std::vector<RationalMatrix>& matrices) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(matrices.size());
  for (const auto& m : matrices) {
    Eigen::MatrixXd img(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) img(i, j) = psi(m(i, j));
    out.push_back(std::move(img));
  }
  return out;
}

PCAModel pca_fit(const Eigen::MatrixXd& rows, int k) {
  if (rows.rows() < 1 || k < 1 || k > rows.cols() || rows.rows() < k)
    throw std::invalid_argument("pca_fit: need n >= k >= 1 and k <= ambient dimension");
  PCAModel m;
  m.k = k;
  m.mean = rows.colwise().mean();
  Eigen::MatrixXd centered = rows.rowwise() - m.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  m.singular_values = svd.singularValues();
  m.components = svd.matrixV().leftCols(k).transpose();
  return m;
}

double PCAModel::explained_variance_ratio(int j) const {
  double total = 0.0, head = 0.0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    double s2 = singular_values(i) * singular_values(i);
    total += s2;
    if (i < j) head += s2;
  }
  if (total == 0.0) return 1.0;  // degenerate data: nothing to explain
  return head / total;
}

FeatureRecord feature_record(const Pencil& e, const std::vector<ConnectionMatrix>& matrices,
                             const PCAModel* pca) {
  FeatureRecord rec;
  rec.edge = e.edge_id();
  rec.vec70 = edge_vector(e.f, e.g);
  std::vector<RationalMatrix> raw;
  raw.reserve(matrices.size());
  for (const auto& cm : matrices) raw.push_back(cm.entries);
  rec.channels = psi_channels(raw);
  rec.stats = matrix_stats(raw);
  if (pca) rec.pca = pca->transform(rec.vec70);
  return rec;
}

}  // namespace pfpath
