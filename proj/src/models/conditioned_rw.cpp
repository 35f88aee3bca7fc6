#include "ers/models/conditioned_rw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

#include "ers/log_math.hpp"

namespace ers {

namespace {

double distance_to(const Interval& s, double x) {
  if (x < s.low) return s.low - x;
  if (x > s.high) return x - s.high;
  return 0.0;
}

}  // namespace

ConditionedRandomWalk::ConditionedRandomWalk(const ConditionedRandomWalkSpec& spec) : spec_(spec) {
  if (!(spec.support_low < spec.support_high)) throw std::invalid_argument("support must satisfy low < high");
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (spec.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  support_ = {spec.support_low, spec.support_high};
  const double a = drift(spec.support_low);
  const double b = drift(spec.support_high);
  drift_image_ = {std::min(a, b), std::max(a, b)};
  log_length_ = std::log(support_.length());
  log_peak_ = log_length_ - std::log(spec.sigma) - kLogSqrtTwoPi;
  half_inv_var_ = 0.5 / (spec.sigma * spec.sigma);
}

double ConditionedRandomWalk::sample_proposal(std::size_t, RngStream& rng) const {
  return support_.low + support_.length() * rng.uniform();
}

double ConditionedRandomWalk::log_initial_weight(double x) const {
  // mu = q_1 = U(S) and G_1 = 1_S.
  return support_.contains(x) ? 0.0 : kNegInf;
}

double ConditionedRandomWalk::log_transition_weight(std::size_t, double prev, double x) const {
  if (!support_.contains(x)) return kNegInf;
  const double d = x - drift(prev);
  return log_peak_ - half_inv_var_ * d * d;
}

double ConditionedRandomWalk::log_partial_bound_left(std::size_t, double prev) const {
  const double d = distance_to(support_, drift(prev));
  return log_peak_ - half_inv_var_ * d * d;
}

double ConditionedRandomWalk::log_partial_bound_right(std::size_t, double x) const {
  const double d = distance_to(drift_image_, x);
  return log_peak_ - half_inv_var_ * d * d;
}

void ConditionedRandomWalk::log_initial_weights(std::span<const double> xs, std::span<double> out) const {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = log_initial_weight(xs[i]);
}

void ConditionedRandomWalk::log_transition_weights(std::size_t, std::span<const double> prev, double x,
                                                   std::span<double> out) const {
  Eigen::Map<Eigen::ArrayXd> o(out.data(), static_cast<Eigen::Index>(out.size()));
  if (!support_.contains(x)) {
    o.setConstant(kNegInf);
    return;
  }
  const Eigen::Map<const Eigen::ArrayXd> p(prev.data(), static_cast<Eigen::Index>(prev.size()));
  o = log_peak_ - half_inv_var_ * (x - (spec_.drift_slope * p + spec_.drift_intercept)).square();
}

void ConditionedRandomWalk::log_partial_bounds_left(std::size_t t, std::span<const double> prev,
                                                    std::span<double> out) const {
  for (std::size_t j = 0; j < prev.size(); ++j) out[j] = log_partial_bound_left(t, prev[j]);
}

std::optional<double> ConditionedRandomWalk::log_proposal_density(std::size_t, double x) const {
  return support_.contains(x) ? -log_length_ : kNegInf;
}

std::optional<double> ConditionedRandomWalk::log_weight_lower_bound() const {
  // Smallest transition weight over S x S: the largest gap between a point of
  // S and a point of psi(S). w_1 = 1 also has to sit above the bound.
  const double gap = std::max(std::abs(support_.high - drift_image_.low),
                              std::abs(drift_image_.high - support_.low));
  const double log_min_transition = log_peak_ - half_inv_var_ * gap * gap;
  return std::min(0.0, log_min_transition);
}

}  // namespace ers
