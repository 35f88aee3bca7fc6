#include "ers/ensemble_hmm.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "ers/log_math.hpp"
#include "ers/streams.hpp"

namespace ers {

namespace {

using Eigen::ArrayXd;
using Eigen::Index;

// Columns of transition weights requested from the model per call.
constexpr std::size_t kBlockWidth = 64;

std::span<const double> column(const Eigen::MatrixXd& m, std::size_t t) {
  return {m.col(static_cast<Index>(t)).data(), static_cast<std::size_t>(m.rows())};
}

std::span<double> as_span(ArrayXd& a) { return {a.data(), static_cast<std::size_t>(a.size())}; }

double log_ensemble_size(std::size_t n, std::size_t horizon) {
  return static_cast<double>(horizon) * std::log(static_cast<double>(n));
}

// Draws an index from unnormalized log masses by inverse CDF.
std::size_t sample_log_categorical(const ArrayXd& log_mass, ArrayXd& scratch, double u) {
  const double m = log_mass.maxCoeff();
  if (m == kNegInf) throw std::logic_error("backward step with zero total mass");
  scratch = (log_mass - m).exp();
  return sample_categorical(std::span<const double>(scratch.data(), scratch.size()), scratch.sum(), u);
}

}  // namespace

Eigen::VectorXd ForwardFilterResult::filter(std::size_t t) const {
  return log_filters.col(static_cast<Index>(t)).array().exp().matrix();
}

EnsembleGrid sample_grid(const FeynmanKacModel& model, std::size_t n, const RngStream& rng) {
  if (n < 1) throw std::invalid_argument("ensemble size must be at least 1");
  const std::size_t horizon = model.horizon();
  EnsembleGrid grid{Eigen::MatrixXd(static_cast<Index>(n), static_cast<Index>(horizon))};
  const RngStream columns = rng.substream(stream_role::kGrid);
  for (std::size_t t = 0; t < horizon; ++t) {
    RngStream stream = columns.substream(t);
    for (std::size_t i = 0; i < n; ++i) {
      grid.states(static_cast<Index>(i), static_cast<Index>(t)) = model.sample_proposal(t, stream);
    }
  }
  return grid;
}

ForwardFilterResult forward_filter(const FeynmanKacModel& model, const EnsembleGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t horizon = grid.horizon();
  if (horizon != model.horizon()) throw std::invalid_argument("grid horizon does not match the model");

  ForwardFilterResult result;
  result.log_filters.resize(static_cast<Index>(n), static_cast<Index>(horizon));
  ArrayXd incoming(static_cast<Index>(n));
  Eigen::MatrixXd log_w(static_cast<Index>(n), static_cast<Index>(std::min(kBlockWidth, n)));

  model.log_initial_weights(column(grid.states, 0), as_span(incoming));
  double step_norm = log_sum_exp(incoming);
  if (step_norm == kNegInf) {
    result.degenerate_step = 0;
    result.log_norm = result.log_z_hat = kNegInf;
    return result;
  }
  result.log_filters.col(0) = (incoming - step_norm).matrix();
  result.log_norm = step_norm;

  for (std::size_t t = 1; t < horizon; ++t) {
    const auto prev_states = column(grid.states, t - 1);
    const auto prev_filter = result.log_filters.col(static_cast<Index>(t - 1)).array();
    const auto cur_states = column(grid.states, t);
    for (std::size_t start = 0; start < n; start += kBlockWidth) {
      const std::size_t width = std::min(kBlockWidth, n - start);
      auto block = log_w.leftCols(static_cast<Index>(width));
      model.log_transition_block(t, prev_states, cur_states.subspan(start, width), block);
      for (std::size_t c = 0; c < width; ++c) {
        incoming(static_cast<Index>(start + c)) = log_sum_exp(prev_filter + block.col(static_cast<Index>(c)).array());
      }
    }
    step_norm = log_sum_exp(incoming);
    if (step_norm == kNegInf) {
      result.degenerate_step = t;
      result.log_norm = result.log_z_hat = kNegInf;
      return result;
    }
    result.log_filters.col(static_cast<Index>(t)) = (incoming - step_norm).matrix();
    result.log_norm += step_norm;
  }
  result.log_z_hat = result.log_norm - log_ensemble_size(n, horizon);
  return result;
}

ProposalDraw backward_sample(const FeynmanKacModel& model, const EnsembleGrid& grid,
                             const ForwardFilterResult& filters, RngStream& rng) {
  if (filters.degenerate()) throw std::invalid_argument("cannot sample from a degenerate forward pass");
  const std::size_t n = grid.size();
  const std::size_t horizon = grid.horizon();

  ProposalDraw draw;
  draw.path.resize(horizon);
  draw.indices.resize(horizon);
  draw.log_z_hat = filters.log_z_hat;

  ArrayXd log_mass = filters.log_filters.col(static_cast<Index>(horizon - 1)).array();
  ArrayXd scratch(static_cast<Index>(n));
  ArrayXd log_w(static_cast<Index>(n));
  std::size_t k = sample_log_categorical(log_mass, scratch, rng.uniform());
  draw.indices[horizon - 1] = k;
  draw.path[horizon - 1] = grid.state(k, horizon - 1);

  for (std::size_t t = horizon - 1; t-- > 0;) {
    model.log_transition_weights(t + 1, column(grid.states, t), draw.path[t + 1], as_span(log_w));
    log_mass = filters.log_filters.col(static_cast<Index>(t)).array() + log_w;
    k = sample_log_categorical(log_mass, scratch, rng.uniform());
    draw.indices[t] = k;
    draw.path[t] = grid.state(k, t);
  }
  return draw;
}

BoundResult bounding_recursion(const FeynmanKacModel& model, const EnsembleGrid& grid,
                               const ProposalDraw& draw) {
  const std::size_t n = grid.size();
  const std::size_t horizon = grid.horizon();
  if (draw.indices.size() != horizon) throw std::invalid_argument("draw does not match the grid");

  ArrayXd log_filter(static_cast<Index>(n));
  ArrayXd incoming(static_cast<Index>(n));
  Eigen::MatrixXd log_w(static_cast<Index>(n), static_cast<Index>(std::min(kBlockWidth, n)));

  model.log_initial_weights(column(grid.states, 0), as_span(incoming));
  incoming(static_cast<Index>(draw.indices[0])) = model.log_initial_bound();
  double step_norm = log_sum_exp(incoming);
  log_filter = incoming - step_norm;
  BoundResult result;
  result.log_norm = step_norm;

  for (std::size_t t = 1; t < horizon; ++t) {
    const auto prev_states = column(grid.states, t - 1);
    const auto prev_k = static_cast<Index>(draw.indices[t - 1]);
    const std::size_t cur_k = draw.indices[t];
    const auto cur_states = column(grid.states, t);
    for (std::size_t start = 0; start < n; start += kBlockWidth) {
      const std::size_t width = std::min(kBlockWidth, n - start);
      auto block = log_w.leftCols(static_cast<Index>(width));
      model.log_transition_block(t, prev_states, cur_states.subspan(start, width), block);
      for (std::size_t c = 0; c < width; ++c) {
        const std::size_t i = start + c;
        auto col = block.col(static_cast<Index>(c));
        if (i == cur_k) {
          model.log_partial_bounds_left(t, prev_states, std::span<double>(col.data(), n));
          col(prev_k) = model.log_transition_bound(t);
        } else {
          col(prev_k) = model.log_partial_bound_right(t, cur_states[i]);
        }
        incoming(static_cast<Index>(i)) = log_sum_exp(log_filter + col.array());
      }
    }
    step_norm = log_sum_exp(incoming);
    log_filter = incoming - step_norm;
    result.log_norm += step_norm;
  }
  result.log_z_bar = result.log_norm - log_ensemble_size(n, horizon);
  return result;
}

double acceptance_log_ratio(const ForwardFilterResult& filters, const BoundResult& bound) {
  if (filters.log_z_hat == kNegInf) return kNegInf;
  return std::min(0.0, filters.log_norm - bound.log_norm);
}

}  // namespace ers
