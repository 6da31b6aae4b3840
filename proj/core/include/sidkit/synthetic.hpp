#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sidkit/cloud.hpp"

namespace sidkit {

struct GaussianComponent {
  double weight = 1.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

struct GaussianMixtureSpec {
  std::vector<GaussianComponent> components;
  int dim = 0;

  /// Weights positive and summing to 1 (within 1e-12), shapes consistent,
  /// covariances symmetric.
  void validate() const;

  static GaussianMixtureSpec single(Eigen::VectorXd mean,
                                    Eigen::MatrixXd covariance);
  /// Equal-weight mixture with a shared isotropic covariance.
  static GaussianMixtureSpec isotropic(const std::vector<Eigen::VectorXd>& means,
                                       double variance);

  /// Mixture mean and covariance.
  Eigen::VectorXd mixture_mean() const;
  Eigen::MatrixXd mixture_covariance() const;
};

/// Draws `count` samples: a component by weight, then mean + L z with L the
/// Cholesky factor of its covariance and z standard normal.
EmbeddingCloud sample_gmm(const GaussianMixtureSpec& spec, int count,
                          std::uint64_t seed,
                          const std::string& label = "gmm");

struct Scenario {
  std::string name;
  EmbeddingCloud source;
  EmbeddingCloud target;
  GaussianMixtureSpec source_spec;
  GaussianMixtureSpec target_spec;
  /// Predicted sign pattern of SD over the sweep, e.g. "negative-then-zero".
  std::string expectation;
};

/// Preset names, in a stable order.
const std::vector<std::string>& scenario_names();

// Fixed seeds for the mixture means of the fig7 presets. The run seed only
// affects which samples are drawn, not where the modes are.
inline constexpr std::uint64_t kTargetMeansSeed = 20230;
inline constexpr std::uint64_t kDistinctMeansSeed = 20231;

/// Builds a named preset (throws LookupError for unknown names). Source and
/// target use independent streams derived from `seed`.
Scenario scenario(const std::string& name, std::uint64_t seed,
                  int samples_per_cloud = 500);

}  // namespace sidkit
