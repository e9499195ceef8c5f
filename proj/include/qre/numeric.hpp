#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace qre {

inline constexpr double ln2 = 0.6931471805599453094;

/// ln(sum_i exp(t_i)) with max subtraction; -inf for an empty list.
inline double log_sum_exp(const std::vector<double>& terms) {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  double m = terms.front();
  for (double t : terms) m = std::max(m, t);
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

inline double log2_sum_exp(const std::vector<double>& terms_ln) { return log_sum_exp(terms_ln) / ln2; }

}  // namespace qre
