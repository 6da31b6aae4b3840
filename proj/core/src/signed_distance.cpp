#include "sidkit/signed_distance.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "sidkit/errors.hpp"
#include "sidkit/rng.hpp"
#include "sidkit/stats.hpp"

namespace sidkit {

namespace {

// Stream ids for derive_seed; entry i of a sweep uses kEntryStream + i.
constexpr std::uint64_t kSubsampleStream = 0x5b5a;
constexpr std::uint64_t kEntryStream = 0x10000;

// Adds Phi(x_l, c) for every center c to sums[l], visiting centers in row
// order. Blocking over `batch` centers keeps a chunk hot in cache across
// all test points without changing the per-point summation order.
void accumulate_potential(const KernelSpec& kernel, const RowMatrix& points,
                          const RowMatrix& centers, int batch,
                          std::vector<double>& sums) {
  const Eigen::Index m = points.rows();
  const Eigen::Index n = points.cols();
  const Eigen::Index nc = centers.rows();
  for (Eigen::Index b0 = 0; b0 < nc; b0 += batch) {
    const Eigen::Index b1 = std::min<Eigen::Index>(nc, b0 + batch);
    for (Eigen::Index l = 0; l < m; ++l) {
      const double* x = points.data() + l * n;
      double acc = sums[static_cast<std::size_t>(l)];
      for (Eigen::Index j = b0; j < b1; ++j) {
        const double* c = centers.data() + j * n;
        double d2 = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double d = x[k] - c[k];
          d2 += d * d;
        }
        acc += kernel.eval_sq(d2);
      }
      sums[static_cast<std::size_t>(l)] = acc;
    }
  }
}

}  // namespace

HypercubeSpec::HypercubeSpec(Eigen::VectorXd center, double side)
    : center_(std::move(center)), side_(side) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw ArgumentError("hypercube side must be positive and finite");
  }
  if (center_.size() == 0 || !center_.allFinite()) {
    throw ArgumentError("hypercube center must be a finite, non-empty vector");
  }
}

void SweepConfig::validate() const {
  if (!std::isfinite(multiplier_start) || !std::isfinite(multiplier_stop) ||
      multiplier_start > multiplier_stop) {
    throw ArgumentError("sweep requires start <= stop");
  }
  if (!(multiplier_step > 0.0)) {
    throw ArgumentError("sweep step must be > 0");
  }
  if (test_points_per_r < 1 || batch_size < 1 || max_samples_per_cloud < 1) {
    throw ArgumentError("sweep counts (M_x, N_B, sample cap) must be >= 1");
  }
}

std::vector<double> SweepConfig::multipliers() const {
  validate();
  std::vector<double> out;
  // Index-based so the grid does not accumulate rounding drift.
  const double tol = 1e-9 * multiplier_step;
  for (std::size_t i = 0;; ++i) {
    const double k = multiplier_start + static_cast<double>(i) * multiplier_step;
    if (k > multiplier_stop + tol) break;
    out.push_back(k);
  }
  return out;
}

RowMatrix sample_hypercube(const HypercubeSpec& cube, int count,
                           std::uint64_t rng_seed) {
  if (count < 1) throw ArgumentError("hypercube sample count must be >= 1");
  const Eigen::Index n = cube.center().size();
  RowMatrix out(count, n);
  Engine rng(rng_seed);
  const double half = 0.5 * cube.side();
  for (Eigen::Index l = 0; l < count; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out(l, k) = cube.center()(k) - half + cube.side() * uniform01(rng);
    }
  }
  return out;
}

SdResult signed_distance(const EmbeddingCloud& source,
                         const EmbeddingCloud& target,
                         const KernelSpec& kernel, const HypercubeSpec& cube,
                         int test_points, std::uint64_t rng_seed,
                         int batch_size) {
  if (source.dim() != target.dim() || target.dim() != kernel.dim_n() ||
      cube.center().size() != target.dim()) {
    throw ShapeError("signed distance with source dim " +
                     std::to_string(source.dim()) + ", target dim " +
                     std::to_string(target.dim()) + ", kernel n " +
                     std::to_string(kernel.dim_n()) + ", cube dim " +
                     std::to_string(cube.center().size()));
  }
  if (batch_size < 1) throw ArgumentError("batch size must be >= 1");

  const RowMatrix points = sample_hypercube(cube, test_points, rng_seed);
  const auto m = static_cast<std::size_t>(test_points);
  std::vector<double> target_sum(m, 0.0);
  std::vector<double> source_sum(m, 0.0);
  accumulate_potential(kernel, points, target.data(), batch_size, target_sum);
  accumulate_potential(kernel, points, source.data(), batch_size, source_sum);

  const double inv_nq = 1.0 / static_cast<double>(target.count());
  const double inv_np = 1.0 / static_cast<double>(source.count());
  std::vector<double> per_point(m);
  double total = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    if (!std::isfinite(target_sum[l]) || !std::isfinite(source_sum[l])) {
      throw OverflowError("potential at a test point is not representable",
                          std::fabs(static_cast<double>(kernel.exponent_p())));
    }
    per_point[l] = target_sum[l] * inv_nq - source_sum[l] * inv_np;
    total += per_point[l];
  }
  SdResult r;
  r.sd = total / static_cast<double>(m);
  if (m > 1) {
    double ss = 0.0;
    for (double v : per_point) ss += (v - r.sd) * (v - r.sd);
    r.std_error = std::sqrt(ss / static_cast<double>(m - 1)) /
                  std::sqrt(static_cast<double>(m));
  }
  return r;
}

SidCurve sid_sweep(const EmbeddingCloud& source, const EmbeddingCloud& target,
                   const KernelSpec& kernel, const SweepConfig& config,
                   unsigned max_threads) {
  const std::vector<double> grid = config.multipliers();
  if (source.dim() != target.dim() || target.dim() != kernel.dim_n()) {
    throw ShapeError("sweep with source dim " + std::to_string(source.dim()) +
                     ", target dim " + std::to_string(target.dim()) +
                     ", kernel n " + std::to_string(kernel.dim_n()));
  }
  const std::uint64_t sub_seed = derive_seed(config.seed, kSubsampleStream);
  const EmbeddingCloud src =
      subsample(source, config.max_samples_per_cloud, sub_seed);
  const EmbeddingCloud tgt =
      subsample(target, config.max_samples_per_cloud, sub_seed);

  const CloudStats stats = compute_stats(tgt, false);
  if (!(stats.sigma_q > 0.0)) {
    throw DegenerateTargetError("target '" + target.label() +
                                "' has sigma_q = max diag(covariance) = 0");
  }

  SidCurve curve{{}, kernel, config, source.label(), target.label(),
                 stats.sigma_q};
  curve.entries.resize(grid.size());

  auto run_entry = [&](std::size_t i) {
    const double side = grid[i] * stats.sigma_q;
    const HypercubeSpec cube(stats.mean, side);
    const SdResult sd = signed_distance(
        src, tgt, kernel, cube, config.test_points_per_r,
        derive_seed(config.seed, kEntryStream + i), config.batch_size);
    curve.entries[i] = {grid[i], side, sd.sd, sd.std_error};
  };

  unsigned workers = max_threads == 0 ? std::thread::hardware_concurrency()
                                      : max_threads;
  workers = std::clamp<unsigned>(workers, 1u,
                                 static_cast<unsigned>(grid.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_entry(i);
    return curve;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < grid.size(); i = next++) {
        try {
          run_entry(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = grid.size();
        }
      }
    });
  }
  pool.clear();  // joins
  if (failure) std::rethrow_exception(failure);
  return curve;
}

CsidValue csid(const SidCurve& curve) {
  if (curve.entries.empty()) throw ArgumentError("CSID of an empty curve");
  double sum = 0.0;
  for (const auto& e : curve.entries) sum += e.sd_value;
  return {sum, &curve};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_curve_csv(const SidCurve& curve, std::ostream& out) {
  out << "multiplier,side_r,sd,stderr\n";
  for (const auto& e : curve.entries) {
    out << format_double(e.multiplier) << ',' << format_double(e.side_r) << ','
        << format_double(e.sd_value) << ',' << format_double(e.mc_stderr)
        << '\n';
  }
}

std::string curve_csv(const SidCurve& curve) {
  std::ostringstream ss;
  write_curve_csv(curve, ss);
  return std::move(ss).str();
}

}  // namespace sidkit
