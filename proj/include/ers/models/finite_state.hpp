#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "ers/model.hpp"

namespace ers {

/// Weight tables on the state space {0, ..., M-1}. `transitions` holds either
/// one table shared by every step or one table per step t = 1..T-1
/// (transitions[t-1]); entry (a, b) is w_t(a, b).
struct FiniteStateSpec {
  std::size_t state_count = 2;
  std::size_t horizon = 1;
  Eigen::VectorXd initial;
  std::vector<Eigen::MatrixXd> transitions;
};

/// q_t is uniform on the M states; states are carried as doubles holding the
/// integer label. Bounds are the table maxima, and the partial bounds are the
/// row and column maxima.
class FiniteStateModel final : public FeynmanKacModel {
 public:
  explicit FiniteStateModel(FiniteStateSpec spec);

  const FiniteStateSpec& spec() const { return spec_; }
  std::size_t state_count() const { return spec_.state_count; }
  const Eigen::MatrixXd& table(std::size_t t) const;

  std::size_t horizon() const override { return spec_.horizon; }
  double sample_proposal(std::size_t t, RngStream& rng) const override;
  double log_initial_weight(double x) const override;
  double log_transition_weight(std::size_t t, double prev, double x) const override;
  double log_initial_bound() const override { return log_initial_bound_; }
  double log_transition_bound(std::size_t t) const override;
  double log_partial_bound_left(std::size_t t, double prev) const override;
  double log_partial_bound_right(std::size_t t, double x) const override;
  bool has_partial_bounds() const override { return true; }
  std::optional<double> log_proposal_density(std::size_t t, double x) const override;
  std::optional<double> log_weight_lower_bound() const override;

 private:
  std::size_t table_index(std::size_t t) const;
  std::size_t state_index(double x) const;

  FiniteStateSpec spec_;
  Eigen::VectorXd log_initial_;
  std::vector<Eigen::MatrixXd> log_tables_;
  std::vector<Eigen::VectorXd> log_row_max_;
  std::vector<Eigen::VectorXd> log_col_max_;
  std::vector<double> log_table_max_;
  double log_initial_bound_;
};

/// A spec whose entries are i.i.d. uniform on [low, high).
FiniteStateSpec random_finite_state_spec(std::size_t state_count, std::size_t horizon, RngStream& rng,
                                         double low = 0.05, double high = 1.0, bool per_step_tables = false);

}  // namespace ers
