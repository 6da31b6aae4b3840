#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sidkit/cloud.hpp"
#include "sidkit/kernel.hpp"

namespace sidkit {

/// Axis-aligned cube of full side `side`: coordinates span center +/- side/2.
class HypercubeSpec {
 public:
  HypercubeSpec(Eigen::VectorXd center, double side);

  const Eigen::VectorXd& center() const noexcept { return center_; }
  double side() const noexcept { return side_; }

 private:
  Eigen::VectorXd center_;
  double side_;
};

/// Hypercube sweep parameters. Cube side is multiplier * sigma_q of the
/// target for each multiplier on the grid start, start + step, ... <= stop.
struct SweepConfig {
  double multiplier_start = 1.0;
  double multiplier_stop = 100.0;
  double multiplier_step = 0.5;
  int test_points_per_r = 128;        // M_x
  int batch_size = 100;               // N_B, centers per chunk
  int max_samples_per_cloud = 5000;
  std::uint64_t seed = 0;

  void validate() const;
  std::vector<double> multipliers() const;
};

struct SidEntry {
  double multiplier = 0.0;
  double side_r = 0.0;
  double sd_value = 0.0;
  double mc_stderr = 0.0;
};

struct SidCurve {
  std::vector<SidEntry> entries;
  KernelSpec kernel;
  SweepConfig config;
  std::string source_label;
  std::string target_label;
  double sigma_q = 0.0;
};

struct CsidValue {
  double value = 0.0;
  const SidCurve* curve = nullptr;
};

struct SdResult {
  double sd = 0.0;
  double std_error = 0.0;
};

/// M_x points drawn uniformly from the cube; one point per row.
RowMatrix sample_hypercube(const HypercubeSpec& cube, int count,
                           std::uint64_t rng_seed);

/// Monte-Carlo signed distance of `source` from `target` over `cube`:
///   mean_l [ mean_j Phi(x_l, target_j) - mean_i Phi(x_l, source_i) ].
/// Positive when the target's potential dominates inside the cube.
/// `batch_size` only changes the loop blocking, never the result.
SdResult signed_distance(const EmbeddingCloud& source,
                         const EmbeddingCloud& target,
                         const KernelSpec& kernel, const HypercubeSpec& cube,
                         int test_points, std::uint64_t rng_seed,
                         int batch_size = 100);

/// Evaluates the signed distance over the whole multiplier grid. Entries
/// are independent and spread over up to `max_threads` workers
/// (0 = hardware concurrency); output does not depend on the thread count.
SidCurve sid_sweep(const EmbeddingCloud& source, const EmbeddingCloud& target,
                   const KernelSpec& kernel, const SweepConfig& config,
                   unsigned max_threads = 0);

CsidValue csid(const SidCurve& curve);

/// `multiplier,side_r,sd,stderr` with shortest round-trip number format.
void write_curve_csv(const SidCurve& curve, std::ostream& out);
std::string curve_csv(const SidCurve& curve);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace sidkit
