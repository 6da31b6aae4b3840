#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "sidkit/cloud.hpp"

namespace sidkit {

struct FidReport {
  double value = 0.0;
  double mean_term = 0.0;
  double trace_term = 0.0;
  std::pair<Eigen::Index, Eigen::Index> samples_used{0, 0};
};

struct KidReport {
  double value = 0.0;
  int block_count = 0;
  std::pair<Eigen::Index, Eigen::Index> samples_used{0, 0};
};

inline constexpr Eigen::Index kFidSampleCap = 10000;
inline constexpr Eigen::Index kKidSampleCap = 5000;
inline constexpr Eigen::Index kKidBlock = 1000;

/// Frechet distance between Gaussians with the given moments:
///   |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a^{1/2} S_b S_a^{1/2})^{1/2}).
FidReport frechet_distance(const Eigen::VectorXd& mean_a,
                           const Eigen::MatrixXd& cov_a,
                           const Eigen::VectorXd& mean_b,
                           const Eigen::MatrixXd& cov_b);

/// FID between Gaussians fitted to two clouds (each capped at 10000 rows by
/// seeded subsampling).
FidReport fid(const EmbeddingCloud& a, const EmbeddingCloud& b,
              std::uint64_t seed = 0);

/// Polynomial kernel ((1/n) x.y + 1)^3.
double kid_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y);

/// Unbiased squared MMD with the cubic polynomial kernel over at most 5000
/// rows per cloud, accumulated in blocks of `block` rows.
KidReport kid(const EmbeddingCloud& a, const EmbeddingCloud& b,
              std::uint64_t seed = 0, Eigen::Index block = kKidBlock);

/// Mean over images of the variance of the valid-mode 4-neighbor Laplacian
/// response.
double sharpness(const std::vector<Eigen::MatrixXd>& images);

}  // namespace sidkit
