#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "ers/model.hpp"

namespace ers {

/// Quadrature nodes for the oracle: either cell midpoints of a bounded
/// interval (log_cell_measure = log width) or the labels of a finite state
/// space (log_cell_measure = 0).
struct Discretization {
  std::vector<double> points;
  double log_cell_measure = 0.0;
};

Discretization midpoint_grid(const Interval& support, std::size_t resolution);
Discretization state_lattice(std::size_t state_count);

/// Exact posterior of the discretized chain, from a dense forward-backward pass.
struct GridOracleResult {
  Discretization grid;
  Eigen::MatrixXd marginals;     // M x T, columns sum to 1
  Eigen::MatrixXd log_forward;   // normalized forward messages
  Eigen::MatrixXd log_backward;  // backward messages scaled by the same constants
  std::vector<double> log_step_norms;
  double log_z = 0.0;
};

/// Dense O(M^2 T) forward-backward on `grid` using gamma = w * prod q_t.
/// Needs the model's proposal density.
GridOracleResult grid_oracle(const FeynmanKacModel& model, const Discretization& grid);

/// Same, on `resolution` midpoints of the model's oracle support. Throws
/// std::invalid_argument when resolution < 2 or the model has no support.
GridOracleResult grid_oracle(const FeynmanKacModel& model, std::size_t resolution);

/// Joint law of (x_t, x_{t+1}) under the discretized posterior; M x M.
Eigen::MatrixXd grid_oracle_pair_marginal(const FeynmanKacModel& model, const GridOracleResult& oracle,
                                          std::size_t t);

}  // namespace ers
