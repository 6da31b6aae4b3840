#include "sidkit/stats.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "sidkit/errors.hpp"

namespace sidkit {

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, bool with_vectors) {
  if (a.rows() != a.cols()) {
    throw ShapeError("eigendecomposition of a non-square matrix");
  }
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      sym, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    // Eigen's QR iteration limit is 30 sweeps per dimension.
    throw NumericError("symmetric eigensolver did not converge within " +
                       std::to_string(30 * a.rows()) + " iterations (n=" +
                       std::to_string(a.rows()) + ")");
  }
  SymmetricEigen out;
  out.values = solver.eigenvalues().reverse();
  if (with_vectors) {
    out.vectors = solver.eigenvectors().rowwise().reverse();
  }
  return out;
}

CloudStats compute_stats(const EmbeddingCloud& cloud, bool with_eigen) {
  if (cloud.count() < 2) {
    throw InsufficientSamplesError("covariance of '" + cloud.label() +
                                   "' needs N >= 2, got N=" +
                                   std::to_string(cloud.count()));
  }
  const RowMatrix& x = cloud.data();
  CloudStats s;
  s.mean = x.colwise().mean().transpose();
  const RowMatrix centered = x.rowwise() - s.mean.transpose();
  s.covariance = (centered.transpose() * centered) /
                 static_cast<double>(cloud.count() - 1);
  // The product above is symmetric up to rounding; make it exact.
  s.covariance = 0.5 * (s.covariance + s.covariance.transpose()).eval();
  s.sigma_q = s.covariance.diagonal().maxCoeff();
  if (with_eigen) {
    auto eig = symmetric_eigen(s.covariance);
    s.eigenvalues = std::move(eig.values);
    s.eigenvectors = std::move(eig.vectors);
  }
  return s;
}

}  // namespace sidkit
