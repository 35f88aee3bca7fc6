#pragma once

#include <cstddef>
#include <vector>

#include "ers/model.hpp"
#include "ers/models/nonlinear_ar.hpp"

namespace ers {

/// x_1 ~ N(0, sigma^2 / (1 - phi^2)), x_t = phi x_{t-1} + sigma v_t,
/// y_t = beta exp(x_t / 2) e_t with standard normal e_t.
struct StochVolSpec {
  double phi = 0.95;
  double beta = 0.7;
  double sigma = 0.3;
  std::vector<double> observations;
};

/// Proposal: X_t = log y_t^2 - log beta^2 - W_t with exp(W_t) ~ chi^2(1).
/// Then g(y_t | x) / q_t(x) = 1 / |y_t| for every x, a data constant that is
/// dropped, leaving w_1 = mu and w_t = f.
class StochVol final : public FeynmanKacModel {
 public:
  explicit StochVol(StochVolSpec spec);

  const StochVolSpec& spec() const { return spec_; }
  double stationary_sd() const;

  std::size_t horizon() const override { return spec_.observations.size(); }
  double sample_proposal(std::size_t t, RngStream& rng) const override;
  double log_initial_weight(double x) const override;
  double log_transition_weight(std::size_t t, double prev, double x) const override;
  double log_initial_bound() const override { return log_mu_peak_; }
  double log_transition_bound(std::size_t) const override { return log_f_peak_; }
  void log_initial_weights(std::span<const double> xs, std::span<double> out) const override;
  void log_transition_weights(std::size_t t, std::span<const double> prev, double x,
                              std::span<double> out) const override;
  std::optional<double> log_proposal_density(std::size_t t, double x) const override;
  std::optional<Interval> oracle_support() const override;

 private:
  StochVolSpec spec_;
  double log_mu_peak_;
  double log_f_peak_;
  double half_inv_var_;
};

/// log g(y | x) = log N(y; 0, beta^2 exp(x)).
double stoch_vol_observation_log_density(double y, double x, double beta);
/// log q(x) for the proposal built from observation y.
double stoch_vol_proposal_log_density(double y, double x, double beta);
/// CDF of the same proposal.
double stoch_vol_proposal_cdf(double y, double x, double beta);

SimulatedData simulate_stoch_vol(const StochVolSpec& spec, std::size_t horizon, RngStream& rng);

}  // namespace ers
