#include "ers/models/nonlinear_ar.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

#include "ers/log_math.hpp"

namespace ers {

NonlinearAr::NonlinearAr(NonlinearArSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.sigma_v > 0.0) || !(spec_.sigma_w > 0.0)) {
    throw std::invalid_argument("nonlinear AR noise scales must be positive");
  }
  if (spec_.observations.empty()) throw std::invalid_argument("nonlinear AR needs at least one observation");
  log_f_peak_ = -std::log(spec_.sigma_v) - kLogSqrtTwoPi;
  half_inv_var_v_ = 0.5 / (spec_.sigma_v * spec_.sigma_v);
}

double NonlinearAr::sample_proposal(std::size_t t, RngStream& rng) const {
  return rng.normal(spec_.observations[t], spec_.sigma_w);
}

double NonlinearAr::log_initial_weight(double x) const { return -0.5 * x * x - kLogSqrtTwoPi; }

double NonlinearAr::log_transition_weight(std::size_t, double prev, double x) const {
  const double d = x - spec_.phi * std::tanh(prev);
  return log_f_peak_ - half_inv_var_v_ * d * d;
}

double NonlinearAr::log_initial_bound() const { return -kLogSqrtTwoPi; }

double NonlinearAr::log_transition_bound(std::size_t) const { return log_f_peak_; }

void NonlinearAr::log_initial_weights(std::span<const double> xs, std::span<double> out) const {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = log_initial_weight(xs[i]);
}

void NonlinearAr::log_transition_weights(std::size_t, std::span<const double> prev, double x,
                                         std::span<double> out) const {
  const Eigen::Map<const Eigen::ArrayXd> p(prev.data(), static_cast<Eigen::Index>(prev.size()));
  Eigen::Map<Eigen::ArrayXd> o(out.data(), static_cast<Eigen::Index>(out.size()));
  o = log_f_peak_ - half_inv_var_v_ * (x - spec_.phi * p.tanh()).square();
}

void NonlinearAr::log_transition_block(std::size_t, std::span<const double> prev, std::span<const double> cur,
                                       Eigen::Ref<Eigen::MatrixXd> out) const {
  const Eigen::Map<const Eigen::ArrayXd> p(prev.data(), static_cast<Eigen::Index>(prev.size()));
  const Eigen::ArrayXd mean = spec_.phi * p.tanh();
  for (std::size_t i = 0; i < cur.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)).array() = log_f_peak_ - half_inv_var_v_ * (cur[i] - mean).square();
  }
}

std::optional<double> NonlinearAr::log_proposal_density(std::size_t t, double x) const {
  return log_normal_density(x, spec_.observations[t], spec_.sigma_w);
}

std::optional<Interval> NonlinearAr::oracle_support() const {
  // Both mu and the stationary law have standard deviation at most
  // max(1, sqrt(phi^2 + sigma_v^2)).
  const double sd = std::max(1.0, std::sqrt(spec_.phi * spec_.phi + spec_.sigma_v * spec_.sigma_v));
  return Interval{-8.0 * sd, 8.0 * sd};
}

SimulatedData simulate_nonlinear_ar(const NonlinearArSpec& spec, std::size_t horizon, RngStream& rng) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  SimulatedData data;
  data.latents.resize(horizon);
  data.observations.resize(horizon);
  double x = rng.normal();
  for (std::size_t t = 0; t < horizon; ++t) {
    if (t > 0) x = spec.phi * std::tanh(x) + spec.sigma_v * rng.normal();
    data.latents[t] = x;
    data.observations[t] = x + spec.sigma_w * rng.normal();
  }
  return data;
}

}  // namespace ers
