#pragma once

#include <cstddef>
#include <vector>

#include "ers/model.hpp"

namespace ers {

/// x_1 ~ N(0, 1), x_t = phi tanh(x_{t-1}) + sigma_v v_t, y_t = x_t + sigma_w w_t.
struct NonlinearArSpec {
  double phi = 0.9;
  double sigma_v = 0.3;
  double sigma_w = 0.1;
  std::vector<double> observations;
};

/// Proposal q_t = N(y_t, sigma_w^2), proportional to g(y_t | x) in x, which
/// leaves w_1 = mu and w_t = f.
class NonlinearAr final : public FeynmanKacModel {
 public:
  explicit NonlinearAr(NonlinearArSpec spec);

  const NonlinearArSpec& spec() const { return spec_; }

  std::size_t horizon() const override { return spec_.observations.size(); }
  double sample_proposal(std::size_t t, RngStream& rng) const override;
  double log_initial_weight(double x) const override;
  double log_transition_weight(std::size_t t, double prev, double x) const override;
  double log_initial_bound() const override;
  double log_transition_bound(std::size_t t) const override;
  void log_initial_weights(std::span<const double> xs, std::span<double> out) const override;
  void log_transition_weights(std::size_t t, std::span<const double> prev, double x,
                              std::span<double> out) const override;
  void log_transition_block(std::size_t t, std::span<const double> prev, std::span<const double> cur,
                            Eigen::Ref<Eigen::MatrixXd> out) const override;
  std::optional<double> log_proposal_density(std::size_t t, double x) const override;
  std::optional<Interval> oracle_support() const override;

 private:
  NonlinearArSpec spec_;
  double log_f_peak_;
  double half_inv_var_v_;
};

struct SimulatedData {
  std::vector<double> latents;
  std::vector<double> observations;
};

/// Forward-simulates T steps; spec.observations is ignored.
SimulatedData simulate_nonlinear_ar(const NonlinearArSpec& spec, std::size_t horizon, RngStream& rng);

}  // namespace ers
