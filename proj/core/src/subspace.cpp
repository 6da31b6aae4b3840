#include "sidkit/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sidkit/errors.hpp"

namespace sidkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-based eigenvalue with the sentinels l_0 = +inf, l_{n+1} = -inf.
double eig_at(const Eigen::VectorXd& values, int i) {
  if (i <= 0) return kInf;
  if (i > values.size()) return -kInf;
  return values(i - 1);
}

}  // namespace

double sin_theta_bound(const CloudStats& stats_p, const CloudStats& stats_q,
                       int r, int s) {
  if (!stats_p.has_eigen() || !stats_q.has_eigen()) {
    throw ArgumentError("sin-theta bound requires eigenvalues in both stats");
  }
  const auto n = static_cast<int>(stats_q.eigenvalues.size());
  if (stats_p.eigenvalues.size() != n || stats_p.covariance.rows() != n ||
      stats_q.covariance.rows() != n) {
    throw ShapeError("sin-theta bound on covariances of different size");
  }
  if (r < 1 || r > s || s > n) {
    throw ArgumentError("sin-theta bound needs 1 <= r <= s <= n (r=" +
                        std::to_string(r) + ", s=" + std::to_string(s) +
                        ", n=" + std::to_string(n) + ")");
  }
  const int d = s - r + 1;
  const double fro = (stats_p.covariance - stats_q.covariance).norm();
  const double op =
      (stats_p.eigenvalues - stats_q.eigenvalues).cwiseAbs().maxCoeff();
  const double numerator = 2.0 * std::min(std::sqrt(double(d)) * op, fro);

  const auto& lq = stats_q.eigenvalues;
  const double gap = std::min(eig_at(lq, r - 1) - eig_at(lq, r),
                              eig_at(lq, s) - eig_at(lq, s + 1));
  // Identical spectra and covariances bound nothing away from zero, even
  // across a degenerate gap.
  if (numerator == 0.0) return 0.0;
  if (gap <= kDegenerateGap) return kInf;
  return numerator / gap;
}

SinThetaReport min_sin_theta(const CloudStats& stats_p,
                             const CloudStats& stats_q) {
  const auto n = static_cast<int>(stats_q.eigenvalues.size());
  if (n < 30) {
    throw ArgumentError("min sin-theta needs n >= 30 so that s = 3..ceil(n/10)"
                        " is non-empty (n=" + std::to_string(n) + ")");
  }
  SinThetaReport rep;
  rep.dim_n = n;
  rep.min_value = kInf;
  const int s_max = (n + 9) / 10;
  for (int s = 3; s <= s_max; ++s) {
    const double b = sin_theta_bound(stats_p, stats_q, rep.fixed_r, s);
    rep.per_s.push_back({s, b});
    if (std::isinf(b)) ++rep.degenerate_count;
    rep.min_value = std::min(rep.min_value, b);
  }
  return rep;
}

SinThetaReport min_sin_theta(const EmbeddingCloud& cloud_p,
                             const EmbeddingCloud& cloud_q) {
  if (cloud_p.dim() != cloud_q.dim()) {
    throw ShapeError("min sin-theta between clouds of dim " +
                     std::to_string(cloud_p.dim()) + " and " +
                     std::to_string(cloud_q.dim()));
  }
  if (cloud_q.dim() < 30) {
    throw ArgumentError("min sin-theta needs n >= 30 (n=" +
                        std::to_string(cloud_q.dim()) + ")");
  }
  // Only eigenvalues and covariances enter the bound.
  CloudStats sp = compute_stats(cloud_p, false);
  CloudStats sq = compute_stats(cloud_q, false);
  sp.eigenvalues = symmetric_eigen(sp.covariance, false).values;
  sq.eigenvalues = symmetric_eigen(sq.covariance, false).values;
  return min_sin_theta(sp, sq);
}

}  // namespace sidkit
