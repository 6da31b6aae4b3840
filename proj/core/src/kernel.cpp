#include "sidkit/kernel.hpp"

#include <cfloat>
#include <cmath>
#include <vector>

#include "sidkit/errors.hpp"
#include "sidkit/logsumexp.hpp"

namespace sidkit {

std::string to_string(KernelBranch b) {
  return b == KernelBranch::Power ? "power" : "log-weighted";
}

std::string to_string(SumMode m) {
  return m == SumMode::Direct ? "direct" : "log-domain";
}

KernelSpec::KernelSpec(std::optional<int> m, int n, int p, double kappa,
                       double floor)
    : order_m_(m),
      dim_n_(n),
      exponent_p_(p),
      branch_(p >= 0 && n % 2 == 0 ? KernelBranch::LogWeighted
                                   : KernelBranch::Power),
      kappa_(kappa),
      radius_floor_(floor) {
  if (n < 1) throw ArgumentError("kernel dimension n must be >= 1");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ArgumentError("kernel kappa must be a positive finite number");
  }
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw ArgumentError("kernel radius floor must be a positive finite number");
  }
}

KernelSpec KernelSpec::from_order(int order_m, int dim_n, double kappa,
                                  double radius_floor) {
  if (order_m < 1) throw ArgumentError("kernel order m must be >= 1");
  return KernelSpec(order_m, dim_n, 2 * order_m - dim_n, kappa, radius_floor);
}

KernelSpec KernelSpec::from_exponent(int exponent_p, int dim_n, double kappa,
                                     double radius_floor) {
  std::optional<int> m;
  if ((exponent_p + dim_n) % 2 == 0 && exponent_p + dim_n >= 2) {
    m = (exponent_p + dim_n) / 2;
  }
  return KernelSpec(m, dim_n, exponent_p, kappa, radius_floor);
}

double kernel_eval(const KernelSpec& spec, double distance) {
  const double r = distance > spec.radius_floor() ? distance
                                                  : spec.radius_floor();
  const double rp = std::pow(r, spec.exponent_p());
  if (spec.branch() == KernelBranch::Power) return spec.kappa() * rp;
  return spec.kappa() * rp * std::log(r);
}

namespace {

void check_dims(const KernelSpec& spec, Eigen::Index query_dim,
                const EmbeddingCloud& centers) {
  if (query_dim != centers.dim() || centers.dim() != spec.dim_n()) {
    throw ShapeError("kernel sum with query dim " + std::to_string(query_dim) +
                     ", centers dim " + std::to_string(centers.dim()) +
                     ", kernel n " + std::to_string(spec.dim_n()));
  }
}

bool is_collapsed(double v) {
  return v == 0.0 || std::fpclassify(v) == FP_SUBNORMAL;
}

}  // namespace

KernelSum kernel_sum(const KernelSpec& spec,
                     const Eigen::Ref<const Eigen::VectorXd>& query,
                     const EmbeddingCloud& centers, SumMode mode) {
  check_dims(spec, query.size(), centers);
  const RowMatrix& c = centers.data();
  const double abs_p = std::fabs(static_cast<double>(spec.exponent_p()));
  KernelSum out;

  if (mode == SumMode::Direct) {
    double sum = 0.0;
    bool term_collapsed = false;
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      const double d2 = (c.row(i).transpose() - query).squaredNorm();
      const double term = spec.eval_sq(d2);
      if (!std::isfinite(term)) {
        throw OverflowError("kernel term is not representable", abs_p);
      }
      if (spec.branch() == KernelBranch::Power && is_collapsed(term)) {
        term_collapsed = true;
      }
      sum += term;
    }
    if (!std::isfinite(sum)) {
      throw OverflowError("direct kernel sum overflowed", abs_p);
    }
    out.value = sum;
    out.sign = sum > 0 ? 1 : (sum < 0 ? -1 : 0);
    out.log_abs = sum == 0.0 ? -INFINITY : std::log(std::fabs(sum));
    out.collapsed = term_collapsed || (spec.branch() == KernelBranch::Power &&
                                       is_collapsed(sum));
    return out;
  }

  if (spec.branch() != KernelBranch::Power) {
    throw UnsupportedModeError(
        "log-domain summation requires the power branch (p = " +
        std::to_string(spec.exponent_p()) + ", n = " +
        std::to_string(spec.dim_n()) + " selects the log-weighted branch)");
  }
  std::vector<double> logs(static_cast<std::size_t>(c.rows()));
  const double floor_sq = spec.radius_floor() * spec.radius_floor();
  const double log_kappa = std::log(spec.kappa());
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    double d2 = (c.row(i).transpose() - query).squaredNorm();
    d2 = d2 > floor_sq ? d2 : floor_sq;
    logs[static_cast<std::size_t>(i)] =
        0.5 * spec.exponent_p() * std::log(d2) + log_kappa;
  }
  const SignedLog s = signed_log_sum_exp(logs);
  out.log_abs = s.log_abs;
  out.sign = s.sign;
  if (s.log_abs > std::log(DBL_MAX)) {
    throw OverflowError("log-domain kernel sum exceeds the double range "
                        "(log|sum| = " + std::to_string(s.log_abs) + ")",
                        abs_p);
  }
  out.value = s.sign * std::exp(s.log_abs);
  out.collapsed = is_collapsed(out.value);
  return out;
}

}  // namespace sidkit
