#include "sidkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sidkit/errors.hpp"
#include "sidkit/stats.hpp"

namespace sidkit {

namespace {

// Eigenvalues below -kNegTol * scale are a real loss of definiteness;
// anything between that and zero is rounding noise and is clamped.
constexpr double kNegTol = 1e-6;

double clamp_psd(double lambda, double scale, const char* what) {
  if (lambda < -kNegTol * scale) {
    throw NumericError(std::string(what) + " has eigenvalue " +
                       std::to_string(lambda) + " below -1e-6 * |S| (|S| = " +
                       std::to_string(scale) + ")");
  }
  return lambda > 0.0 ? lambda : 0.0;
}

double spectral_scale(const Eigen::VectorXd& eigenvalues) {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

void check_pair(const EmbeddingCloud& a, const EmbeddingCloud& b,
                const char* metric) {
  if (a.dim() != b.dim()) {
    throw ShapeError(std::string(metric) + " between clouds of dim " +
                     std::to_string(a.dim()) + " and " +
                     std::to_string(b.dim()));
  }
  if (a.count() < 2 || b.count() < 2) {
    throw InsufficientSamplesError(std::string(metric) +
                                   " needs at least 2 samples per cloud");
  }
}

// Sum of the cubic kernel over a block of rows of x against rows of y.
// When `skip_diagonal` is set, x and y are the same block and i == j terms
// are dropped.
double block_kernel_sum(const RowMatrix& x, Eigen::Index x0, Eigen::Index x1,
                        const RowMatrix& y, Eigen::Index y0, Eigen::Index y1,
                        bool skip_diagonal) {
  const double inv_n = 1.0 / static_cast<double>(x.cols());
  const Eigen::MatrixXd g =
      (x.middleRows(x0, x1 - x0) * y.middleRows(y0, y1 - y0).transpose()) *
      inv_n;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      if (skip_diagonal && i == j) continue;
      const double t = g(i, j) + 1.0;
      sum += t * t * t;
    }
  }
  return sum;
}

double within_sum(const RowMatrix& x, Eigen::Index block, int& blocks) {
  double sum = 0.0;
  const Eigen::Index n = x.rows();
  for (Eigen::Index i0 = 0; i0 < n; i0 += block) {
    const Eigen::Index i1 = std::min(n, i0 + block);
    for (Eigen::Index j0 = 0; j0 < n; j0 += block) {
      const Eigen::Index j1 = std::min(n, j0 + block);
      sum += block_kernel_sum(x, i0, i1, x, j0, j1, i0 == j0);
      ++blocks;
    }
  }
  return sum;
}

double cross_sum(const RowMatrix& x, const RowMatrix& y, Eigen::Index block,
                 int& blocks) {
  double sum = 0.0;
  for (Eigen::Index i0 = 0; i0 < x.rows(); i0 += block) {
    const Eigen::Index i1 = std::min(x.rows(), i0 + block);
    for (Eigen::Index j0 = 0; j0 < y.rows(); j0 += block) {
      const Eigen::Index j1 = std::min(y.rows(), j0 + block);
      sum += block_kernel_sum(x, i0, i1, y, j0, j1, false);
      ++blocks;
    }
  }
  return sum;
}

// Strict weak order on clouds by shape then raw data. The cross term is
// always evaluated with the smaller cloud first so kid(a, b) and kid(b, a)
// perform identical arithmetic.
bool cloud_less(const RowMatrix& a, const RowMatrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

}  // namespace

FidReport frechet_distance(const Eigen::VectorXd& mean_a,
                           const Eigen::MatrixXd& cov_a,
                           const Eigen::VectorXd& mean_b,
                           const Eigen::MatrixXd& cov_b) {
  const auto n = mean_a.size();
  if (mean_b.size() != n || cov_a.rows() != n || cov_a.cols() != n ||
      cov_b.rows() != n || cov_b.cols() != n) {
    throw ShapeError("Frechet distance with mismatched moment shapes");
  }
  const SymmetricEigen ea = symmetric_eigen(cov_a);
  const double scale =
      std::max(spectral_scale(ea.values),
               spectral_scale(symmetric_eigen(cov_b, false).values));

  Eigen::VectorXd root_vals(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    root_vals(i) = std::sqrt(clamp_psd(ea.values(i), scale, "covariance A"));
  }
  const Eigen::MatrixXd root_a =
      ea.vectors * root_vals.asDiagonal() * ea.vectors.transpose();
  const Eigen::MatrixXd inner = root_a * cov_b * root_a;
  const SymmetricEigen ei = symmetric_eigen(inner, false);
  // inner has the spectrum of S_a S_b, whose scale is up to scale^2.
  const double inner_scale = std::max(spectral_scale(ei.values), scale * scale);
  double tr_root = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    tr_root += std::sqrt(clamp_psd(ei.values(i), inner_scale,
                                   "product A^1/2 B A^1/2"));
  }

  FidReport r;
  r.mean_term = (mean_a - mean_b).squaredNorm();
  r.trace_term = cov_a.trace() + cov_b.trace() - 2.0 * tr_root;
  r.value = r.mean_term + r.trace_term;
  return r;
}

FidReport fid(const EmbeddingCloud& a, const EmbeddingCloud& b,
              std::uint64_t seed) {
  check_pair(a, b, "FID");
  const EmbeddingCloud sa = subsample(a, kFidSampleCap, seed);
  const EmbeddingCloud sb = subsample(b, kFidSampleCap, seed);
  const CloudStats ma = compute_stats(sa, false);
  const CloudStats mb = compute_stats(sb, false);
  FidReport r =
      frechet_distance(ma.mean, ma.covariance, mb.mean, mb.covariance);
  r.samples_used = {sa.count(), sb.count()};
  return r;
}

double kid_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size() || x.size() == 0) {
    throw ShapeError("KID kernel on vectors of different or zero length");
  }
  const double t = x.dot(y) / static_cast<double>(x.size()) + 1.0;
  return t * t * t;
}

KidReport kid(const EmbeddingCloud& a, const EmbeddingCloud& b,
              std::uint64_t seed, Eigen::Index block) {
  check_pair(a, b, "KID");
  if (block < 1) throw ArgumentError("KID block size must be >= 1");
  const EmbeddingCloud sa = subsample(a, kKidSampleCap, seed);
  const EmbeddingCloud sb = subsample(b, kKidSampleCap, seed);
  const RowMatrix& x = sa.data();
  const RowMatrix& y = sb.data();
  const double m = static_cast<double>(x.rows());
  const double n = static_cast<double>(y.rows());

  KidReport r;
  const double kxx = within_sum(x, block, r.block_count) / (m * (m - 1.0));
  const double kyy = within_sum(y, block, r.block_count) / (n * (n - 1.0));
  const double kxy = (cloud_less(y, x) ? cross_sum(y, x, block, r.block_count)
                                       : cross_sum(x, y, block, r.block_count)) /
                     (m * n);
  r.value = kxx + kyy - 2.0 * kxy;
  r.samples_used = {sa.count(), sb.count()};
  return r;
}

double sharpness(const std::vector<Eigen::MatrixXd>& images) {
  if (images.empty()) throw ArgumentError("sharpness of an empty image list");
  double total = 0.0;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const Eigen::MatrixXd& img = images[k];
    if (img.rows() < 3 || img.cols() < 3) {
      throw ShapeError("image " + std::to_string(k) + " is " +
                       std::to_string(img.rows()) + "x" +
                       std::to_string(img.cols()) +
                       ", smaller than the 3x3 Laplacian");
    }
    const Eigen::Index h = img.rows() - 2;
    const Eigen::Index w = img.cols() - 2;
    const Eigen::MatrixXd edge =
        img.block(0, 1, h, w) + img.block(2, 1, h, w) + img.block(1, 0, h, w) +
        img.block(1, 2, h, w) - 4.0 * img.block(1, 1, h, w);
    const double mean = edge.mean();
    total += (edge.array() - mean).square().mean();
  }
  return total / static_cast<double>(images.size());
}

}  // namespace sidkit
