#include "ers/models/stoch_vol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "ers/log_math.hpp"

namespace ers {

StochVol::StochVol(StochVolSpec spec) : spec_(std::move(spec)) {
  if (!(std::abs(spec_.phi) < 1.0)) throw std::invalid_argument("stochastic volatility needs |phi| < 1");
  if (!(spec_.beta > 0.0) || !(spec_.sigma > 0.0)) {
    throw std::invalid_argument("stochastic volatility beta and sigma must be positive");
  }
  if (spec_.observations.empty()) throw std::invalid_argument("stochastic volatility needs observations");
  for (std::size_t t = 0; t < spec_.observations.size(); ++t) {
    const double y = spec_.observations[t];
    if (y == 0.0 || !std::isfinite(y)) {
      throw std::invalid_argument("observation " + std::to_string(t) +
                                  " is zero or not finite; log y^2 is undefined");
    }
  }
  // Peak of N(0, sigma^2 / (1 - phi^2)) is sqrt((1 - phi^2) / (2 pi sigma^2)).
  log_mu_peak_ = -std::log(stationary_sd()) - kLogSqrtTwoPi;
  log_f_peak_ = -std::log(spec_.sigma) - kLogSqrtTwoPi;
  half_inv_var_ = 0.5 / (spec_.sigma * spec_.sigma);
}

double StochVol::stationary_sd() const { return spec_.sigma / std::sqrt(1.0 - spec_.phi * spec_.phi); }

double StochVol::sample_proposal(std::size_t t, RngStream& rng) const {
  const double y = spec_.observations[t];
  const double z = rng.normal();
  // W = log(z^2) with z^2 ~ chi^2(1).
  return std::log(y * y) - 2.0 * std::log(spec_.beta) - std::log(z * z);
}

double StochVol::log_initial_weight(double x) const { return log_normal_density(x, 0.0, stationary_sd()); }

double StochVol::log_transition_weight(std::size_t, double prev, double x) const {
  const double d = x - spec_.phi * prev;
  return log_f_peak_ - half_inv_var_ * d * d;
}

void StochVol::log_initial_weights(std::span<const double> xs, std::span<double> out) const {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = log_initial_weight(xs[i]);
}

void StochVol::log_transition_weights(std::size_t, std::span<const double> prev, double x,
                                      std::span<double> out) const {
  const Eigen::Map<const Eigen::ArrayXd> p(prev.data(), static_cast<Eigen::Index>(prev.size()));
  Eigen::Map<Eigen::ArrayXd> o(out.data(), static_cast<Eigen::Index>(out.size()));
  o = log_f_peak_ - half_inv_var_ * (x - spec_.phi * p).square();
}

std::optional<double> StochVol::log_proposal_density(std::size_t t, double x) const {
  return stoch_vol_proposal_log_density(spec_.observations[t], x, spec_.beta);
}

std::optional<Interval> StochVol::oracle_support() const {
  const double half_width = 8.0 * stationary_sd();
  return Interval{-half_width, half_width};
}

double stoch_vol_observation_log_density(double y, double x, double beta) {
  // N(y; 0, beta^2 e^x), written through c = y^2 e^-x / beta^2 like the
  // proposal density so the two cancel to the last bits.
  const double c = y * y / (beta * beta) * std::exp(-x);
  return -std::log(beta) - 0.5 * x - kLogSqrtTwoPi - 0.5 * c;
}

double stoch_vol_proposal_log_density(double y, double x, double beta) {
  // x = a - w with a = log(y^2 / beta^2); w = log c, c ~ chi^2(1), so
  // q(x) = p_W(a - x) and log p_W(w) = w / 2 - e^w / 2 - log sqrt(2 pi).
  const double c = y * y / (beta * beta) * std::exp(-x);
  return std::log(std::abs(y)) - std::log(beta) - 0.5 * x - kLogSqrtTwoPi - 0.5 * c;
}

double stoch_vol_proposal_cdf(double y, double x, double beta) {
  // P(X <= x) = P(C >= exp(a - x)) = erfc(sqrt(exp(a - x) / 2)).
  const double c = y * y / (beta * beta) * std::exp(-x);
  return std::erfc(std::sqrt(0.5 * c));
}

SimulatedData simulate_stoch_vol(const StochVolSpec& spec, std::size_t horizon, RngStream& rng) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!(std::abs(spec.phi) < 1.0)) throw std::invalid_argument("stochastic volatility needs |phi| < 1");
  SimulatedData data;
  data.latents.resize(horizon);
  data.observations.resize(horizon);
  double x = rng.normal(0.0, spec.sigma / std::sqrt(1.0 - spec.phi * spec.phi));
  for (std::size_t t = 0; t < horizon; ++t) {
    if (t > 0) x = spec.phi * x + spec.sigma * rng.normal();
    data.latents[t] = x;
    data.observations[t] = spec.beta * std::exp(0.5 * x) * rng.normal();
  }
  return data;
}

}  // namespace ers
