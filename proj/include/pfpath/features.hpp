#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pfpath/connection.hpp"
#include "pfpath/dataset.hpp"

namespace pfpath {

/// Height transform psi(m1/m2) = log|m1| + log m2 on lowest-terms rationals;
/// psi(0) := 0 so sparse matrices stay sparse under psi.
double psi(const Rational& q);

/// log(|m1|)^2 + log(m2)^2 with the same zero convention.
double psi_entropy(const Rational& q);

struct MatrixStats {
  double sum = 0.0;       // Psi_s
  double entropy = 0.0;   // Psi_e = -sum of psi_entropy
  long nonzero = 0;       // Psi_l: entries with psi != 0
};

/// Statistics of a stack of rational matrices viewed as one 3-tensor.
MatrixStats matrix_stats(const std::vector<RationalMatrix>& channels);

/// Concatenated coefficient vectors of the two endpoints over the 35 quartic
/// monomials in the fixed grevlex order; length 70.
Eigen::VectorXd edge_vector(const QPolynomial& f, const QPolynomial& g);

/// psi applied entrywise, one 21x21 image per basepoint.
std::vector<Eigen::MatrixXd> psi_channels(const std::vector<RationalMatrix>& matrices);

/// PCA by singular value decomposition of the centered sample matrix.
struct PCAModel {
  Eigen::VectorXd mean;               // ambient mean
  Eigen::MatrixXd components;         // k x ambient, orthonormal rows
  Eigen::VectorXd singular_values;    // all of them, descending
  int k = 0;

  Eigen::VectorXd transform(const Eigen::VectorXd& v) const {
    return components * (v - mean);
  }
  /// Fraction of total variance captured by the first j components.
  double explained_variance_ratio(int j) const;
};

PCAModel pca_fit(const Eigen::MatrixXd& rows, int k);

/// Everything the models consume for one edge. Rational data stays exact in
/// the stores; doubles appear only here, after psi.
struct FeatureRecord {
  std::string edge;
  Eigen::VectorXd vec70;
  Eigen::VectorXd pca;                  // empty until a PCA model is applied
  std::vector<Eigen::MatrixXd> channels;
  MatrixStats stats;
};

FeatureRecord feature_record(const Pencil& e, const std::vector<ConnectionMatrix>& matrices,
                             const PCAModel* pca = nullptr);

}  // namespace pfpath
