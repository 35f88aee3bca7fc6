#include "ers/models/grid_oracle.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "ers/log_math.hpp"

namespace ers {

namespace {

using Eigen::ArrayXd;
using Eigen::Index;

ArrayXd log_proposal_column(const FeynmanKacModel& model, const Discretization& grid, std::size_t t) {
  ArrayXd out(static_cast<Index>(grid.points.size()));
  for (std::size_t b = 0; b < grid.points.size(); ++b) {
    const auto lq = model.log_proposal_density(t, grid.points[b]);
    if (!lq) throw std::invalid_argument("grid oracle needs the model's proposal density");
    out(static_cast<Index>(b)) = *lq;
  }
  return out;
}

// Column b holds log w_t(points[a], points[b]) over a.
Eigen::MatrixXd log_transition_matrix(const FeynmanKacModel& model, const Discretization& grid, std::size_t t) {
  const auto m = static_cast<Index>(grid.points.size());
  Eigen::MatrixXd out(m, m);
  for (Index b = 0; b < m; ++b) {
    model.log_transition_weights(t, grid.points, grid.points[static_cast<std::size_t>(b)],
                                 std::span<double>(out.col(b).data(), static_cast<std::size_t>(m)));
  }
  return out;
}

}  // namespace

Discretization midpoint_grid(const Interval& support, std::size_t resolution) {
  if (resolution < 2) throw std::invalid_argument("grid oracle resolution must be at least 2");
  Discretization grid;
  const double width = support.length() / static_cast<double>(resolution);
  grid.points.resize(resolution);
  for (std::size_t b = 0; b < resolution; ++b) grid.points[b] = support.low + (static_cast<double>(b) + 0.5) * width;
  grid.log_cell_measure = std::log(width);
  return grid;
}

Discretization state_lattice(std::size_t state_count) {
  Discretization grid;
  grid.points.resize(state_count);
  for (std::size_t k = 0; k < state_count; ++k) grid.points[k] = static_cast<double>(k);
  return grid;
}

GridOracleResult grid_oracle(const FeynmanKacModel& model, std::size_t resolution) {
  if (resolution < 2) throw std::invalid_argument("grid oracle resolution must be at least 2");
  const auto support = model.oracle_support();
  if (!support) throw std::invalid_argument("model has no bounded oracle support");
  return grid_oracle(model, midpoint_grid(*support, resolution));
}

GridOracleResult grid_oracle(const FeynmanKacModel& model, const Discretization& grid) {
  const auto m = static_cast<Index>(grid.points.size());
  const std::size_t horizon = model.horizon();
  if (m < 1) throw std::invalid_argument("empty discretization");

  GridOracleResult result;
  result.grid = grid;
  result.log_forward.resize(m, static_cast<Index>(horizon));
  result.log_backward.resize(m, static_cast<Index>(horizon));
  result.log_step_norms.resize(horizon);

  // Forward pass.
  ArrayXd alpha(m);
  model.log_initial_weights(grid.points, std::span<double>(alpha.data(), static_cast<std::size_t>(m)));
  alpha += log_proposal_column(model, grid, 0) + grid.log_cell_measure;
  for (std::size_t t = 0;; ++t) {
    const double norm = log_sum_exp(alpha);
    if (norm == kNegInf) throw std::runtime_error("discretized posterior has zero mass");
    result.log_step_norms[t] = norm;
    result.log_forward.col(static_cast<Index>(t)) = (alpha - norm).matrix();
    if (t + 1 == horizon) break;
    const Eigen::MatrixXd log_w = log_transition_matrix(model, grid, t + 1);
    const ArrayXd prev = result.log_forward.col(static_cast<Index>(t)).array();
    const ArrayXd emit = log_proposal_column(model, grid, t + 1) + grid.log_cell_measure;
    for (Index b = 0; b < m; ++b) alpha(b) = log_sum_exp(prev + log_w.col(b).array()) + emit(b);
  }
  result.log_z = 0.0;
  for (double c : result.log_step_norms) result.log_z += c;

  // Backward pass, scaled by the forward normalizers.
  result.log_backward.col(static_cast<Index>(horizon - 1)).setZero();
  for (std::size_t t = horizon - 1; t-- > 0;) {
    const Eigen::MatrixXd log_w = log_transition_matrix(model, grid, t + 1);
    const ArrayXd next = result.log_backward.col(static_cast<Index>(t + 1)).array() +
                         log_proposal_column(model, grid, t + 1) + grid.log_cell_measure;
    for (Index a = 0; a < m; ++a) {
      result.log_backward(a, static_cast<Index>(t)) =
          log_sum_exp(log_w.row(a).transpose().array() + next) - result.log_step_norms[t + 1];
    }
  }

  result.marginals.resize(m, static_cast<Index>(horizon));
  for (std::size_t t = 0; t < horizon; ++t) {
    const ArrayXd lp = result.log_forward.col(static_cast<Index>(t)).array() +
                       result.log_backward.col(static_cast<Index>(t)).array();
    result.marginals.col(static_cast<Index>(t)) = (lp - log_sum_exp(lp)).exp().matrix();
  }
  return result;
}

Eigen::MatrixXd grid_oracle_pair_marginal(const FeynmanKacModel& model, const GridOracleResult& oracle,
                                          std::size_t t) {
  if (t + 1 >= model.horizon()) throw std::out_of_range("pair marginal needs t + 1 < T");
  const Discretization& grid = oracle.grid;
  const auto m = static_cast<Index>(grid.points.size());
  const Eigen::MatrixXd log_w = log_transition_matrix(model, grid, t + 1);
  const ArrayXd right = oracle.log_backward.col(static_cast<Index>(t + 1)).array() +
                        log_proposal_column(model, grid, t + 1) + grid.log_cell_measure;
  Eigen::MatrixXd log_joint(m, m);
  for (Index a = 0; a < m; ++a) {
    log_joint.row(a) = (oracle.log_forward(a, static_cast<Index>(t)) + log_w.row(a).transpose().array() + right)
                           .matrix()
                           .transpose();
  }
  const double norm = log_sum_exp(Eigen::Map<const ArrayXd>(log_joint.data(), log_joint.size()));
  return (log_joint.array() - norm).exp().matrix();
}

}  // namespace ers
