#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sidkit/errors.hpp"
#include "sidkit/stats.hpp"
#include "sidkit/subspace.hpp"

using namespace sidkit;

namespace {

CloudStats from_cov(const Eigen::MatrixXd& cov) {
  CloudStats s;
  s.mean = Eigen::VectorXd::Zero(cov.rows());
  s.covariance = cov;
  s.sigma_q = cov.diagonal().maxCoeff();
  auto eig = symmetric_eigen(cov);
  s.eigenvalues = eig.values;
  s.eigenvectors = eig.vectors;
  return s;
}

CloudStats diag(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return from_cov(v.asDiagonal());
}

}  // namespace

TEST_CASE("hand case gives 2/3") {
  const auto p = diag({5, 1, 0.25});
  const auto q = diag({4, 1, 0.25});
  CHECK(std::fabs(sin_theta_bound(p, q, 1, 1) - 2.0 / 3.0) <= 1e-12);
  // Same spectra listed in the opposite diagonal order.
  const auto p2 = diag({0.25, 1, 5});
  const auto q2 = diag({0.25, 1, 4});
  CHECK(std::fabs(sin_theta_bound(p2, q2, 1, 1) - 2.0 / 3.0) <= 1e-12);
}

TEST_CASE("equal covariances give exactly zero for every (r, s)") {
  std::mt19937_64 rng(1);
  const auto s = from_cov(oracle::random_spd(6, rng));
  for (int r = 1; r <= 6; ++r)
    for (int t = r; t <= 6; ++t) CHECK(sin_theta_bound(s, s, r, t) == 0.0);
  // Even with a repeated eigenvalue.
  const auto rep = diag({2, 2, 1});
  CHECK(sin_theta_bound(rep, rep, 1, 1) == 0.0);
}

TEST_CASE("degenerate gap yields the +inf sentinel") {
  const auto p = diag({3, 2, 1});
  const auto q = diag({2, 2, 1});
  CHECK(std::isinf(sin_theta_bound(p, q, 1, 1)));
  CHECK(std::isfinite(sin_theta_bound(p, q, 1, 2)));
}

TEST_CASE("argument validation") {
  const auto p = diag({3, 2, 1});
  CHECK_THROWS_AS(sin_theta_bound(p, p, 0, 1), ArgumentError);
  CHECK_THROWS_AS(sin_theta_bound(p, p, 2, 1), ArgumentError);
  CHECK_THROWS_AS(sin_theta_bound(p, p, 1, 4), ArgumentError);
  CHECK_THROWS_AS(sin_theta_bound(p, diag({1, 1}), 1, 1), ShapeError);
  std::mt19937_64 rng(2);
  const EmbeddingCloud small("s", oracle::random_matrix(50, 29, rng));
  CHECK_THROWS_AS(min_sin_theta(small, small), ArgumentError);
}

TEST_CASE("property: joint scaling invariance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = oracle::random_spd(8, rng);
    const Eigen::MatrixXd b = oracle::random_spd(8, rng);
    const double c = u(rng);
    const double base = sin_theta_bound(from_cov(a), from_cov(b), 1, 3);
    const double scaled = sin_theta_bound(from_cov(c * a), from_cov(c * b), 1, 3);
    CHECK(std::fabs(base - scaled) <= 1e-9 * std::max(1.0, base));
  }
}

TEST_CASE("min over s equals the exhaustive per-s minimum") {
  std::mt19937_64 rng(4);
  const int n = 320;
  const RowMatrix x = oracle::random_matrix(400, n, rng);
  RowMatrix y = oracle::random_matrix(400, n, rng);
  y.leftCols(10) *= 2.0;
  const auto sp = compute_stats(EmbeddingCloud("p", x), true);
  const auto sq = compute_stats(EmbeddingCloud("q", y), true);
  const auto rep = min_sin_theta(sp, sq);
  CHECK(rep.min_value == oracle::exhaustive_min_sin_theta(sp, sq));
  CHECK(rep.per_s.size() == 30);
  CHECK(rep.per_s.front().s == 3);
  CHECK(rep.per_s.back().s == 32);
  CHECK(rep.dim_n == n);
  CHECK(rep.fixed_r == 1);
  CHECK(rep.min_value > 0.0);

  const auto from_clouds = min_sin_theta(EmbeddingCloud("p", x), EmbeddingCloud("q", y));
  CHECK(from_clouds.min_value == doctest::Approx(rep.min_value).epsilon(1e-9));
}

TEST_CASE("degenerate entries are counted") {
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(40, 40, 1);
  Eigen::VectorXd e = d;
  d(0) += 1.0;
  e(3) = e(2);  // gap at s = 3 vanishes in the target
  const auto rep = min_sin_theta(from_cov(d.asDiagonal()), from_cov(e.asDiagonal()));
  CHECK(rep.degenerate_count == 1);
  CHECK(std::isinf(rep.per_s.front().bound));
  CHECK(std::isfinite(rep.min_value));
}
