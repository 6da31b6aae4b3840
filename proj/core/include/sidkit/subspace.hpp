#pragma once

#include <vector>

#include "sidkit/cloud.hpp"
#include "sidkit/stats.hpp"

namespace sidkit {

struct SinThetaEntry {
  int s = 0;
  double bound = 0.0;  // +inf when the target eigen-gap is degenerate
};

struct SinThetaReport {
  double min_value = 0.0;
  std::vector<SinThetaEntry> per_s;
  int fixed_r = 1;
  int dim_n = 0;
  int degenerate_count = 0;  // entries carrying the +inf sentinel
};

/// Eigen-gaps at or below this are treated as degenerate.
inline constexpr double kDegenerateGap = 1e-12;

/// Davis-Kahan style bound on the sin-theta distance between the
/// eigenspaces spanned by eigenvectors r..s (1-based) of the two
/// covariances:
///
///   2 min{ sqrt(d) |S_p - S_q|_op, |S_p - S_q|_F }
///   ----------------------------------------------,   d = s - r + 1
///   min{ l_{r-1} - l_r, l_s - l_{s+1} }
///
/// where l are the *target* (q) eigenvalues, descending, with
/// l_0 = +inf and l_{n+1} = -inf. The operator norm is approximated by
/// max_i |l^p_i - l^q_i|. Returns +inf for a degenerate gap.
double sin_theta_bound(const CloudStats& stats_p, const CloudStats& stats_q,
                       int r, int s);

/// Minimum of sin_theta_bound over s = 3 .. ceil(n / 10) with r = 1.
/// `cloud_q` is the target. Requires n >= 30.
SinThetaReport min_sin_theta(const EmbeddingCloud& cloud_p,
                             const EmbeddingCloud& cloud_q);

/// Same, from precomputed statistics.
SinThetaReport min_sin_theta(const CloudStats& stats_p,
                             const CloudStats& stats_q);

}  // namespace sidkit
