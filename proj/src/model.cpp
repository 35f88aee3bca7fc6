#include "ers/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ers/log_math.hpp"

namespace ers {

double FeynmanKacModel::log_partial_bound_left(std::size_t t, double) const {
  return log_transition_bound(t);
}

double FeynmanKacModel::log_partial_bound_right(std::size_t t, double) const {
  return log_transition_bound(t);
}

void FeynmanKacModel::log_initial_weights(std::span<const double> xs, std::span<double> out) const {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = log_initial_weight(xs[i]);
}

void FeynmanKacModel::log_transition_weights(std::size_t t, std::span<const double> prev, double x,
                                             std::span<double> out) const {
  for (std::size_t j = 0; j < prev.size(); ++j) out[j] = log_transition_weight(t, prev[j], x);
}

void FeynmanKacModel::log_transition_block(std::size_t t, std::span<const double> prev,
                                           std::span<const double> cur, Eigen::Ref<Eigen::MatrixXd> out) const {
  const auto rows = static_cast<std::size_t>(out.rows());
  for (std::size_t i = 0; i < cur.size(); ++i) {
    log_transition_weights(t, prev, cur[i], std::span<double>(out.col(static_cast<Eigen::Index>(i)).data(), rows));
  }
}

void FeynmanKacModel::log_partial_bounds_left(std::size_t t, std::span<const double> prev,
                                              std::span<double> out) const {
  for (std::size_t j = 0; j < prev.size(); ++j) out[j] = log_partial_bound_left(t, prev[j]);
}

std::optional<double> FeynmanKacModel::log_proposal_density(std::size_t, double) const {
  return std::nullopt;
}

PathWeight evaluate_path_weight(const FeynmanKacModel& model, std::span<const double> path) {
  if (path.size() != model.horizon()) {
    throw std::invalid_argument("path length " + std::to_string(path.size()) +
                                " does not match horizon " + std::to_string(model.horizon()));
  }
  double log_w = model.log_initial_weight(path[0]);
  double w = std::exp(log_w);
  for (std::size_t t = 1; t < path.size(); ++t) {
    const double step = model.log_transition_weight(t, path[t - 1], path[t]);
    log_w += step;
    w *= std::exp(step);
  }
  if (std::isnan(log_w)) log_w = kNegInf;  // -inf + inf cannot occur with finite bounds
  return {log_w, w};
}

PartialBounds effective_partial_bounds(const FeynmanKacModel& model, std::size_t t) {
  if (t < 1 || t >= model.horizon()) {
    throw std::out_of_range("partial bounds requested for t=" + std::to_string(t) +
                            " outside [1, " + std::to_string(model.horizon()) + ")");
  }
  if (model.has_partial_bounds()) {
    return {[&model, t](double prev) { return model.log_partial_bound_left(t, prev); },
            [&model, t](double x) { return model.log_partial_bound_right(t, x); }};
  }
  const double bound = model.log_transition_bound(t);
  return {[bound](double) { return bound; }, [bound](double) { return bound; }};
}

double InstrumentedModel::log_initial_weight(double x) const {
  ++initial_count_;
  const double log_w = inner_.log_initial_weight(x);
  if (check_bounds_) check_initial(x, log_w);
  return log_w;
}

double InstrumentedModel::log_transition_weight(std::size_t t, double prev, double x) const {
  ++transition_count_;
  const double log_w = inner_.log_transition_weight(t, prev, x);
  if (check_bounds_) check_transition(t, prev, x, log_w);
  return log_w;
}

void InstrumentedModel::log_initial_weights(std::span<const double> xs, std::span<double> out) const {
  initial_count_ += xs.size();
  inner_.log_initial_weights(xs, out);
  if (check_bounds_) {
    for (std::size_t i = 0; i < xs.size(); ++i) check_initial(xs[i], out[i]);
  }
}

void InstrumentedModel::log_transition_weights(std::size_t t, std::span<const double> prev, double x,
                                               std::span<double> out) const {
  transition_count_ += prev.size();
  inner_.log_transition_weights(t, prev, x, out);
  if (check_bounds_) {
    for (std::size_t j = 0; j < prev.size(); ++j) check_transition(t, prev[j], x, out[j]);
  }
}

void InstrumentedModel::log_transition_block(std::size_t t, std::span<const double> prev,
                                             std::span<const double> cur, Eigen::Ref<Eigen::MatrixXd> out) const {
  transition_count_ += prev.size() * cur.size();
  inner_.log_transition_block(t, prev, cur, out);
  if (check_bounds_) {
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t j = 0; j < prev.size(); ++j) {
        check_transition(t, prev[j], cur[i], out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
      }
    }
  }
}

void InstrumentedModel::check_initial(double x, double log_w) const {
  if (std::isnan(log_w) || log_w > inner_.log_initial_bound()) {
    throw BoundViolation("initial weight " + std::to_string(log_w) + " (log) at x=" +
                         std::to_string(x) + " exceeds its bound");
  }
}

void InstrumentedModel::check_transition(std::size_t t, double prev, double x, double log_w) const {
  if (std::isnan(log_w) || log_w > inner_.log_transition_bound(t) ||
      log_w > inner_.log_partial_bound_left(t, prev) || log_w > inner_.log_partial_bound_right(t, x)) {
    throw BoundViolation("transition weight at t=" + std::to_string(t) + " (prev=" +
                         std::to_string(prev) + ", x=" + std::to_string(x) +
                         ") exceeds one of its bounds");
  }
}

}  // namespace ers
