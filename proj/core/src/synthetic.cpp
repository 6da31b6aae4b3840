#include "sidkit/synthetic.hpp"

#include <Eigen/Cholesky>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "sidkit/baselines.hpp"
#include "sidkit/errors.hpp"
#include "sidkit/rng.hpp"
#include "sidkit/stats.hpp"

namespace sidkit {

void GaussianMixtureSpec::validate() const {
  if (dim < 1) throw ArgumentError("mixture dimension must be >= 1");
  if (components.empty()) throw ArgumentError("mixture has no components");
  double total = 0.0;
  for (std::size_t k = 0; k < components.size(); ++k) {
    const auto& c = components[k];
    if (!(c.weight > 0.0)) {
      throw ArgumentError("component " + std::to_string(k) +
                          " has non-positive weight");
    }
    if (c.mean.size() != dim || c.covariance.rows() != dim ||
        c.covariance.cols() != dim) {
      throw ShapeError("component " + std::to_string(k) +
                       " does not match mixture dimension " +
                       std::to_string(dim));
    }
    const double asym = (c.covariance - c.covariance.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, c.covariance.cwiseAbs().maxCoeff())) {
      throw ArgumentError("component " + std::to_string(k) +
                          " covariance is not symmetric");
    }
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ArgumentError("mixture weights sum to " + std::to_string(total));
  }
}

GaussianMixtureSpec GaussianMixtureSpec::single(Eigen::VectorXd mean,
                                                Eigen::MatrixXd covariance) {
  GaussianMixtureSpec s;
  s.dim = static_cast<int>(mean.size());
  s.components.push_back({1.0, std::move(mean), std::move(covariance)});
  return s;
}

GaussianMixtureSpec GaussianMixtureSpec::isotropic(
    const std::vector<Eigen::VectorXd>& means, double variance) {
  if (means.empty()) throw ArgumentError("mixture has no components");
  GaussianMixtureSpec s;
  s.dim = static_cast<int>(means.front().size());
  const double w = 1.0 / static_cast<double>(means.size());
  for (const auto& m : means) {
    s.components.push_back(
        {w, m, variance * Eigen::MatrixXd::Identity(s.dim, s.dim)});
  }
  return s;
}

Eigen::VectorXd GaussianMixtureSpec::mixture_mean() const {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim);
  for (const auto& c : components) mu += c.weight * c.mean;
  return mu;
}

Eigen::MatrixXd GaussianMixtureSpec::mixture_covariance() const {
  const Eigen::VectorXd mu = mixture_mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& c : components) {
    const Eigen::VectorXd d = c.mean - mu;
    cov += c.weight * (c.covariance + d * d.transpose());
  }
  return cov;
}

namespace {

// Lower-triangular L with L L^T = cov. Falls back to a symmetric
// eigen-root for PSD matrices that are singular to working precision.
Eigen::MatrixXd factor_covariance(const Eigen::MatrixXd& cov, std::size_t k) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const SymmetricEigen eig = symmetric_eigen(cov);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values.minCoeff() < -1e-12 * scale) {
    throw NumericError("covariance of component " + std::to_string(k) +
                       " is not positive semidefinite (min eigenvalue " +
                       std::to_string(eig.values.minCoeff()) + ")");
  }
  return eig.vectors *
         eig.values.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
         eig.vectors.transpose();
}

std::vector<Eigen::VectorXd> uniform_unit_square_means(int count,
                                                       std::uint64_t seed) {
  Engine rng(seed);
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd m(2);
    m(0) = uniform01(rng);
    m(1) = uniform01(rng);
    out.push_back(m);
  }
  return out;
}

// The 4-of-8 subset whose equal-weight mixture has first and second
// moments closest (in Frechet distance) to the full mixture.
std::vector<Eigen::VectorXd> best_collapsed_subset(
    const std::vector<Eigen::VectorXd>& means, double variance) {
  const GaussianMixtureSpec full = GaussianMixtureSpec::isotropic(means, variance);
  const Eigen::VectorXd mu = full.mixture_mean();
  const Eigen::MatrixXd cov = full.mixture_covariance();
  double best = std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXd> best_subset;
  const int n = static_cast<int>(means.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != 4) continue;
    std::vector<Eigen::VectorXd> subset;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) subset.push_back(means[static_cast<std::size_t>(i)]);
    }
    const auto sub = GaussianMixtureSpec::isotropic(subset, variance);
    const double d = frechet_distance(sub.mixture_mean(),
                                      sub.mixture_covariance(), mu, cov)
                         .value;
    if (d < best) {
      best = d;
      best_subset = std::move(subset);
    }
  }
  return best_subset;
}

Eigen::VectorXd filled(double v) { return Eigen::VectorXd::Constant(2, v); }
Eigen::MatrixXd iso(double v) { return v * Eigen::MatrixXd::Identity(2, 2); }

constexpr double kGmmVariance = 0.02;

}  // namespace

EmbeddingCloud sample_gmm(const GaussianMixtureSpec& spec, int count,
                          std::uint64_t seed, const std::string& label) {
  spec.validate();
  if (count < 1) throw ArgumentError("sample count must be >= 1");
  std::vector<Eigen::MatrixXd> factors;
  std::vector<double> weights;
  for (std::size_t k = 0; k < spec.components.size(); ++k) {
    factors.push_back(factor_covariance(spec.components[k].covariance, k));
    weights.push_back(spec.components[k].weight);
  }
  Engine rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix data(count, spec.dim);
  Eigen::VectorXd z(spec.dim);
  for (int i = 0; i < count; ++i) {
    const std::size_t k = spec.components.size() == 1 ? 0 : pick(rng);
    for (int d = 0; d < spec.dim; ++d) z(d) = normal(rng);
    data.row(i) = (spec.components[k].mean + factors[k] * z).transpose();
  }
  return EmbeddingCloud(label, std::move(data));
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "fig5_far",      "fig5_mid",       "fig5_same",
      "fig6_tight_01", "fig6_tight_025", "fig6_wide",
      "fig7_moment_matched", "fig7_distinct_gmm", "fig7_mode_collapsed"};
  return names;
}

Scenario scenario(const std::string& name, std::uint64_t seed,
                  int samples_per_cloud) {
  GaussianMixtureSpec source_spec;
  GaussianMixtureSpec target_spec;
  std::string expectation;

  const auto gaussian_target = GaussianMixtureSpec::single(filled(5.5), iso(0.75));
  if (name == "fig5_far" || name == "fig5_mid" || name == "fig5_same") {
    const double m = name == "fig5_far" ? 0.0 : (name == "fig5_mid" ? 2.5 : 5.5);
    source_spec = GaussianMixtureSpec::single(filled(m), iso(0.75));
    target_spec = gaussian_target;
    expectation = name == "fig5_same" ? "zero" : "positive-then-zero";
  } else if (name == "fig6_tight_01" || name == "fig6_tight_025" ||
             name == "fig6_wide") {
    const double v =
        name == "fig6_tight_01" ? 0.1 : (name == "fig6_tight_025" ? 0.25 : 1.0);
    source_spec = GaussianMixtureSpec::single(filled(5.5), iso(v));
    target_spec = gaussian_target;
    expectation = name == "fig6_wide" ? "positive-then-zero" : "negative-then-zero";
  } else if (name == "fig7_moment_matched" || name == "fig7_distinct_gmm" ||
             name == "fig7_mode_collapsed") {
    const auto target_means = uniform_unit_square_means(8, kTargetMeansSeed);
    target_spec = GaussianMixtureSpec::isotropic(target_means, kGmmVariance);
    if (name == "fig7_moment_matched") {
      source_spec = GaussianMixtureSpec::single(target_spec.mixture_mean(),
                                                target_spec.mixture_covariance());
      expectation = "negative";
    } else if (name == "fig7_distinct_gmm") {
      source_spec = GaussianMixtureSpec::isotropic(
          uniform_unit_square_means(8, kDistinctMeansSeed), kGmmVariance);
      expectation = "sign-change";
    } else {
      source_spec = GaussianMixtureSpec::isotropic(
          best_collapsed_subset(target_means, kGmmVariance), kGmmVariance);
      expectation = "nonzero-sd-low-fid";
    }
  } else {
    throw LookupError("unknown scenario preset '" + name + "'");
  }

  EmbeddingCloud source = sample_gmm(source_spec, samples_per_cloud,
                                     derive_seed(seed, 1), name + "_source");
  EmbeddingCloud target = sample_gmm(target_spec, samples_per_cloud,
                                     derive_seed(seed, 2), name + "_target");
  return Scenario{name,        std::move(source), std::move(target),
                  std::move(source_spec), std::move(target_spec), expectation};
}

}  // namespace sidkit
