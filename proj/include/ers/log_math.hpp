#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include <Eigen/Core>

namespace ers {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // log(sqrt(2*pi))

/// log(sum(exp(v))) with the maximum factored out. Returns -inf for an empty
/// or all -inf input.
inline double log_sum_exp(const Eigen::Ref<const Eigen::ArrayXd>& v) {
  if (v.size() == 0) return kNegInf;
  const double m = v.maxCoeff();
  if (m == kNegInf) return kNegInf;
  return m + std::log((v - m).exp().sum());
}

/// log N(x; mean, sd^2)
inline double log_normal_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - kLogSqrtTwoPi;
}

/// Inverse-CDF draw from unnormalized nonnegative masses: the first index
/// whose cumulative sum exceeds u * total, with u in [0, 1). Zero-mass
/// entries are never returned. Precondition: total > 0.
inline std::size_t sample_categorical(std::span<const double> mass, double total, double u) {
  const double threshold = u * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    if (mass[k] <= 0.0) continue;
    cumulative += mass[k];
    last_positive = k;
    if (cumulative > threshold) return k;
  }
  // Rounding in the running sum can leave it just short of u * total.
  return last_positive;
}

}  // namespace ers
