#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ers/model.hpp"
#include "ers/rng.hpp"

namespace ers {

/// N x T matrix of proposal states; column t holds N i.i.d. draws from q_t.
struct EnsembleGrid {
  Eigen::MatrixXd states;

  std::size_t size() const { return static_cast<std::size_t>(states.rows()); }
  std::size_t horizon() const { return static_cast<std::size_t>(states.cols()); }
  double state(std::size_t i, std::size_t t) const {
    return states(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
  }
};

/// Output of the forward recursion of the embedded N-state HMM.
struct ForwardFilterResult {
  /// Column t holds log p~(X_t^i | y_{1:t}); each column exponentiates to a
  /// probability vector.
  Eigen::MatrixXd log_filters;
  /// log p~(y_{1:T}) = sum over t of the log one-step normalizers.
  double log_norm = 0.0;
  /// log Z_hat = log_norm - T log N.
  double log_z_hat = 0.0;
  /// First step whose total incoming mass was zero, if any. The recursion
  /// stops there and log_z_hat is -inf.
  std::optional<std::size_t> degenerate_step;

  bool degenerate() const { return degenerate_step.has_value(); }
  Eigen::VectorXd filter(std::size_t t) const;
};

/// A path drawn from the embedded-HMM posterior.
struct ProposalDraw {
  std::vector<double> path;
  std::vector<std::size_t> indices;
  double log_z_hat = 0.0;
};

struct BoundResult {
  double log_norm = 0.0;   // log p_bar(y_{1:T})
  double log_z_bar = 0.0;  // log_norm - T log N
};

EnsembleGrid sample_grid(const FeynmanKacModel& model, std::size_t n, const RngStream& rng);

/// Forward recursion over the grid. Evaluates exactly N + (T-1) N^2 weights.
ForwardFilterResult forward_filter(const FeynmanKacModel& model, const EnsembleGrid& grid);

/// Draws K_T from the final filter, then K_t for t = T-1..1 with probability
/// proportional to w_{t+1}(X_t^j, X_{t+1}^{K_{t+1}}) p~(X_t^j | y_{1:t}).
/// Precondition: filters are not degenerate.
ProposalDraw backward_sample(const FeynmanKacModel& model, const EnsembleGrid& grid,
                             const ForwardFilterResult& filters, RngStream& rng);

/// The bounding recursion: the forward recursion with every weight factor
/// that touches a selected index replaced by the matching bound.
BoundResult bounding_recursion(const FeynmanKacModel& model, const EnsembleGrid& grid,
                               const ProposalDraw& draw);

/// log(Z_hat / Z_bar), clamped to <= 0 against last-ulp rounding.
double acceptance_log_ratio(const ForwardFilterResult& filters, const BoundResult& bound);

}  // namespace ers
