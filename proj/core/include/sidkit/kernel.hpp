#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>

#include "sidkit/cloud.hpp"

namespace sidkit {

enum class KernelBranch {
  Power,        // kappa * r^p
  LogWeighted,  // kappa * r^p * ln r   (p >= 0 and n even)
};

enum class SumMode { Direct, LogDomain };

std::string to_string(KernelBranch b);
std::string to_string(SumMode m);

/// Polyharmonic kernel Phi(x, y) = kappa * |x - y|^p [* ln |x - y|] with
/// exponent p = 2m - n.
///
/// Distances are clamped from below by radius_floor so coincident points
/// produce finite values.
class KernelSpec {
 public:
  static KernelSpec from_order(int order_m, int dim_n, double kappa = 1.0,
                               double radius_floor = 1e-12);
  /// Accepts the exponent directly. order_m() is set only when p + n is even.
  static KernelSpec from_exponent(int exponent_p, int dim_n,
                                  double kappa = 1.0,
                                  double radius_floor = 1e-12);

  std::optional<int> order_m() const noexcept { return order_m_; }
  int dim_n() const noexcept { return dim_n_; }
  int exponent_p() const noexcept { return exponent_p_; }
  KernelBranch branch() const noexcept { return branch_; }
  double kappa() const noexcept { return kappa_; }
  double radius_floor() const noexcept { return radius_floor_; }

  /// Kernel value from a squared distance. Integer powers are formed by
  /// repeated squaring so the hot loops avoid std::pow.
  double eval_sq(double sq_distance) const noexcept {
    const double floor_sq = radius_floor_ * radius_floor_;
    const double d2 = sq_distance > floor_sq ? sq_distance : floor_sq;
    const double rp = power_of_sq(d2);
    if (branch_ == KernelBranch::Power) return kappa_ * rp;
    return kappa_ * rp * (0.5 * std::log(d2));
  }

 private:
  KernelSpec(std::optional<int> m, int n, int p, double kappa, double floor);

  static double ipow(double base, unsigned e) noexcept {
    double result = 1.0;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  // r^p from d2 = r^2.
  double power_of_sq(double d2) const noexcept {
    const int p = exponent_p_;
    const unsigned a = static_cast<unsigned>(p < 0 ? -p : p);
    double mag;
    if (a % 2 == 0) {
      mag = ipow(d2, a / 2);
    } else {
      mag = ipow(d2, a / 2) * std::sqrt(d2);
    }
    return p < 0 ? 1.0 / mag : mag;
  }

  std::optional<int> order_m_;
  int dim_n_;
  int exponent_p_;
  KernelBranch branch_;
  double kappa_;
  double radius_floor_;
};

/// Phi at a given distance (r' = max(distance, radius_floor)).
double kernel_eval(const KernelSpec& spec, double distance);

/// Result of summing Phi(query, c) over a set of centers.
///
/// `log_abs` and `sign` describe the sum even when `value` is not
/// representable; `collapsed` is set when the sum (or one of its terms)
/// underflowed to zero or a subnormal.
struct KernelSum {
  double value = 0.0;
  double log_abs = -INFINITY;
  int sign = 0;
  bool collapsed = false;
};

KernelSum kernel_sum(const KernelSpec& spec,
                     const Eigen::Ref<const Eigen::VectorXd>& query,
                     const EmbeddingCloud& centers, SumMode mode);

}  // namespace sidkit
