#pragma once

#include <Eigen/Dense>

#include "sidkit/cloud.hpp"

namespace sidkit {

/// First and second moments of a cloud, optionally with the sorted
/// eigendecomposition of the covariance.
struct CloudStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // unbiased, divisor N - 1
  double sigma_q = 0.0;        // max of diag(covariance)
  // Descending; column i of eigenvectors pairs with eigenvalues[i].
  // Both empty when computed without eigen-pairs.
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  bool has_eigen() const noexcept { return eigenvalues.size() > 0; }
};

CloudStats compute_stats(const EmbeddingCloud& cloud, bool with_eigen);

/// Symmetric eigendecomposition with eigenvalues sorted descending.
/// The input is symmetrized ((A + A^T) / 2) first.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a,
                               bool with_vectors = true);

}  // namespace sidkit
