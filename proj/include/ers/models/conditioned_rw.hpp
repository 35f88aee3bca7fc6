#pragma once

#include <cstddef>

#include "ers/model.hpp"

namespace ers {

/// Random walk x_t = psi(x_{t-1}) + sigma * eps, started uniformly on S and
/// killed when it leaves S. The drift is affine, psi(x) = slope * x + intercept,
/// so the partial bounds have closed forms.
struct ConditionedRandomWalkSpec {
  double support_low = 0.0;
  double support_high = 1.0;
  double drift_slope = 1.0;
  double drift_intercept = 0.0;
  double sigma = 0.2;
  std::size_t horizon = 100;
};

/// Uses q_t = U(S), so w_1 = 1 on S and w_t(x', x) = |S| N(x; psi(x'), sigma^2) 1_S(x).
class ConditionedRandomWalk final : public FeynmanKacModel {
 public:
  explicit ConditionedRandomWalk(const ConditionedRandomWalkSpec& spec);

  const ConditionedRandomWalkSpec& spec() const { return spec_; }
  double drift(double x) const { return spec_.drift_slope * x + spec_.drift_intercept; }

  std::size_t horizon() const override { return spec_.horizon; }
  double sample_proposal(std::size_t t, RngStream& rng) const override;
  double log_initial_weight(double x) const override;
  double log_transition_weight(std::size_t t, double prev, double x) const override;
  double log_initial_bound() const override { return 0.0; }
  double log_transition_bound(std::size_t) const override { return log_peak_; }
  double log_partial_bound_left(std::size_t t, double prev) const override;
  double log_partial_bound_right(std::size_t t, double x) const override;
  bool has_partial_bounds() const override { return true; }
  void log_initial_weights(std::span<const double> xs, std::span<double> out) const override;
  void log_transition_weights(std::size_t t, std::span<const double> prev, double x,
                              std::span<double> out) const override;
  void log_partial_bounds_left(std::size_t t, std::span<const double> prev,
                               std::span<double> out) const override;
  std::optional<double> log_proposal_density(std::size_t t, double x) const override;
  std::optional<double> log_weight_lower_bound() const override;
  std::optional<Interval> oracle_support() const override { return support_; }

 private:
  ConditionedRandomWalkSpec spec_;
  Interval support_;
  Interval drift_image_;  // psi(S)
  double log_length_;
  double log_peak_;  // log(|S| / sqrt(2 pi sigma^2))
  double half_inv_var_;
};

}  // namespace ers
