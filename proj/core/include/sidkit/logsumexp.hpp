#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace sidkit {

struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;
};

/// log|sum_i s_i * exp(l_i)| and its sign, shifted by max_i l_i so no term
/// is exponentiated out of range. An empty `signs` means all positive.
inline SignedLog signed_log_sum_exp(std::span<const double> logs,
                                    std::span<const int> signs = {}) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double l : logs) hi = l > hi ? l : hi;
  if (hi == -std::numeric_limits<double>::infinity()) return {};
  if (hi == std::numeric_limits<double>::infinity()) return {hi, 1};
  double acc = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double t = std::exp(logs[i] - hi);
    acc += signs.empty() || signs[i] > 0 ? t : -t;
  }
  if (acc == 0.0) return {};
  return {hi + std::log(std::fabs(acc)), acc > 0 ? 1 : -1};
}

}  // namespace sidkit
