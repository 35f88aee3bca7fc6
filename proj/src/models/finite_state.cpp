#include "ers/models/finite_state.hpp"

#include <cmath>
#include <stdexcept>

#include "ers/log_math.hpp"

namespace ers {

namespace {

// std::log everywhere, so a bound equal to an entry rounds exactly like it.
template <typename Derived>
Eigen::MatrixXd scalar_log(const Eigen::MatrixBase<Derived>& m) {
  return m.unaryExpr([](double v) { return std::log(v); });
}

}  // namespace

FiniteStateModel::FiniteStateModel(FiniteStateSpec spec) : spec_(std::move(spec)) {
  const auto m = static_cast<Eigen::Index>(spec_.state_count);
  if (m < 1) throw std::invalid_argument("finite-state model needs at least one state");
  if (spec_.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (spec_.initial.size() != m) throw std::invalid_argument("initial table has the wrong size");
  if (spec_.horizon > 1 && spec_.transitions.size() != 1 && spec_.transitions.size() != spec_.horizon - 1) {
    throw std::invalid_argument("need one shared transition table or one per step");
  }
  if ((spec_.initial.array() < 0.0).any() || !spec_.initial.allFinite()) {
    throw std::invalid_argument("initial weights must be finite and nonnegative");
  }
  log_initial_ = scalar_log(spec_.initial);
  log_initial_bound_ = std::log(spec_.initial.maxCoeff());
  for (const auto& table : spec_.transitions) {
    if (table.rows() != m || table.cols() != m) throw std::invalid_argument("transition table has the wrong shape");
    if ((table.array() < 0.0).any() || !table.allFinite()) {
      throw std::invalid_argument("transition weights must be finite and nonnegative");
    }
    log_tables_.push_back(scalar_log(table));
    log_row_max_.push_back(scalar_log(table.rowwise().maxCoeff()));
    log_col_max_.push_back(scalar_log(table.colwise().maxCoeff().transpose()));
    log_table_max_.push_back(std::log(table.maxCoeff()));
  }
}

std::size_t FiniteStateModel::table_index(std::size_t t) const {
  if (t < 1 || t >= spec_.horizon) throw std::out_of_range("transition step out of range");
  return spec_.transitions.size() == 1 ? 0 : t - 1;
}

std::size_t FiniteStateModel::state_index(double x) const {
  const auto k = static_cast<std::size_t>(x);
  if (x < 0.0 || k >= spec_.state_count || static_cast<double>(k) != x) {
    throw std::out_of_range("not a state label of this model");
  }
  return k;
}

const Eigen::MatrixXd& FiniteStateModel::table(std::size_t t) const { return spec_.transitions[table_index(t)]; }

double FiniteStateModel::sample_proposal(std::size_t, RngStream& rng) const {
  return static_cast<double>(rng.uniform_index(spec_.state_count));
}

double FiniteStateModel::log_initial_weight(double x) const {
  return log_initial_(static_cast<Eigen::Index>(state_index(x)));
}

double FiniteStateModel::log_transition_weight(std::size_t t, double prev, double x) const {
  return log_tables_[table_index(t)](static_cast<Eigen::Index>(state_index(prev)),
                                     static_cast<Eigen::Index>(state_index(x)));
}

double FiniteStateModel::log_transition_bound(std::size_t t) const { return log_table_max_[table_index(t)]; }

double FiniteStateModel::log_partial_bound_left(std::size_t t, double prev) const {
  return log_row_max_[table_index(t)](static_cast<Eigen::Index>(state_index(prev)));
}

double FiniteStateModel::log_partial_bound_right(std::size_t t, double x) const {
  return log_col_max_[table_index(t)](static_cast<Eigen::Index>(state_index(x)));
}

std::optional<double> FiniteStateModel::log_proposal_density(std::size_t, double x) const {
  state_index(x);
  return -std::log(static_cast<double>(spec_.state_count));
}

std::optional<double> FiniteStateModel::log_weight_lower_bound() const {
  double lower = spec_.initial.minCoeff();
  for (const auto& table : spec_.transitions) lower = std::min(lower, table.minCoeff());
  if (!(lower > 0.0)) return std::nullopt;
  return std::log(lower);
}

FiniteStateSpec random_finite_state_spec(std::size_t state_count, std::size_t horizon, RngStream& rng,
                                         double low, double high, bool per_step_tables) {
  const auto m = static_cast<Eigen::Index>(state_count);
  auto draw = [&] { return low + (high - low) * rng.uniform(); };
  FiniteStateSpec spec;
  spec.state_count = state_count;
  spec.horizon = horizon;
  spec.initial.resize(m);
  for (Eigen::Index a = 0; a < m; ++a) spec.initial(a) = draw();
  const std::size_t tables = horizon <= 1 ? 0 : (per_step_tables ? horizon - 1 : 1);
  for (std::size_t k = 0; k < tables; ++k) {
    Eigen::MatrixXd table(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) table(a, b) = draw();
    }
    spec.transitions.push_back(std::move(table));
  }
  return spec;
}

}  // namespace ers
