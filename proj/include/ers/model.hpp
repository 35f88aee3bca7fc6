#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "ers/rng.hpp"

namespace ers {

struct Interval {
  double low;
  double high;
  double length() const { return high - low; }
  bool contains(double x) const { return x >= low && x <= high; }
};

/// A target/proposal bundle for one model instance of horizon T.
///
/// Time indices are zero-based: the initial weight acts at t = 0 and the
/// transition weight at t links state t-1 to state t, for 1 <= t < T. Every
/// weight and bound is returned in log space, with -inf meaning zero.
///
/// Implementations must be immutable after construction; samplers share a
/// model across threads.
class FeynmanKacModel {
 public:
  virtual ~FeynmanKacModel() = default;

  virtual std::size_t horizon() const = 0;

  /// Draw from q_t.
  virtual double sample_proposal(std::size_t t, RngStream& rng) const = 0;

  virtual double log_initial_weight(double x) const = 0;
  virtual double log_transition_weight(std::size_t t, double prev, double x) const = 0;

  virtual double log_initial_bound() const = 0;
  virtual double log_transition_bound(std::size_t t) const = 0;

  /// sup_x w_t(prev, x). Defaults to the constant bound.
  virtual double log_partial_bound_left(std::size_t t, double prev) const;
  /// sup_prev w_t(prev, x). Defaults to the constant bound.
  virtual double log_partial_bound_right(std::size_t t, double x) const;
  virtual bool has_partial_bounds() const { return false; }

  // Batched forms used by the ensemble kernel. The defaults loop over the
  // scalar evaluators; models override them with vectorized code.
  virtual void log_initial_weights(std::span<const double> xs, std::span<double> out) const;
  /// out[j] = log w_t(prev[j], x)
  virtual void log_transition_weights(std::size_t t, std::span<const double> prev, double x,
                                      std::span<double> out) const;
  /// out(j, i) = log w_t(prev[j], cur[i]). The default fills one column at a
  /// time through log_transition_weights.
  virtual void log_transition_block(std::size_t t, std::span<const double> prev, std::span<const double> cur,
                                    Eigen::Ref<Eigen::MatrixXd> out) const;
  /// out[j] = log sup_x w_t(prev[j], x)
  virtual void log_partial_bounds_left(std::size_t t, std::span<const double> prev,
                                       std::span<double> out) const;

  /// log q_t(x), when the proposal density is available (needed by the grid
  /// oracle, never by the samplers).
  virtual std::optional<double> log_proposal_density(std::size_t t, double x) const;

  /// Global lower bound w_lower with w_lower <= w_1 and w_lower <= w_t everywhere
  /// on the support, if the model has one.
  virtual std::optional<double> log_weight_lower_bound() const { return std::nullopt; }

  /// Bounded region carrying the posterior mass, for discretized oracles.
  virtual std::optional<Interval> oracle_support() const { return std::nullopt; }
};

struct PathWeight {
  double log_weight;
  double weight;
};

/// w(x_{1:T}) = w_1(x_1) * prod_t w_t(x_{t-1}, x_t), in log and linear form.
PathWeight evaluate_path_weight(const FeynmanKacModel& model, std::span<const double> path);

/// Log-space partial bound functions effective at step t: the model's own
/// when supplied, otherwise the constant bound. Throws std::out_of_range
/// unless 1 <= t < T.
struct PartialBounds {
  std::function<double(double)> log_left;
  std::function<double(double)> log_right;
};
PartialBounds effective_partial_bounds(const FeynmanKacModel& model, std::size_t t);

/// Thrown by InstrumentedModel when a weight exceeds one of its bounds.
class BoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Wraps a model to count weight evaluations and, optionally, to check every
/// evaluated weight against the declared bounds (zero tolerance).
class InstrumentedModel final : public FeynmanKacModel {
 public:
  explicit InstrumentedModel(const FeynmanKacModel& inner, bool check_bounds = true)
      : inner_(inner), check_bounds_(check_bounds) {}

  std::uint64_t initial_evaluations() const { return initial_count_.load(); }
  std::uint64_t transition_evaluations() const { return transition_count_.load(); }
  std::uint64_t total_evaluations() const { return initial_evaluations() + transition_evaluations(); }
  void reset_counts() {
    initial_count_ = 0;
    transition_count_ = 0;
  }

  std::size_t horizon() const override { return inner_.horizon(); }
  double sample_proposal(std::size_t t, RngStream& rng) const override {
    return inner_.sample_proposal(t, rng);
  }
  double log_initial_weight(double x) const override;
  double log_transition_weight(std::size_t t, double prev, double x) const override;
  double log_initial_bound() const override { return inner_.log_initial_bound(); }
  double log_transition_bound(std::size_t t) const override { return inner_.log_transition_bound(t); }
  double log_partial_bound_left(std::size_t t, double prev) const override {
    return inner_.log_partial_bound_left(t, prev);
  }
  double log_partial_bound_right(std::size_t t, double x) const override {
    return inner_.log_partial_bound_right(t, x);
  }
  bool has_partial_bounds() const override { return inner_.has_partial_bounds(); }
  void log_initial_weights(std::span<const double> xs, std::span<double> out) const override;
  void log_transition_weights(std::size_t t, std::span<const double> prev, double x,
                              std::span<double> out) const override;
  void log_transition_block(std::size_t t, std::span<const double> prev, std::span<const double> cur,
                            Eigen::Ref<Eigen::MatrixXd> out) const override;
  void log_partial_bounds_left(std::size_t t, std::span<const double> prev,
                               std::span<double> out) const override {
    inner_.log_partial_bounds_left(t, prev, out);
  }
  std::optional<double> log_proposal_density(std::size_t t, double x) const override {
    return inner_.log_proposal_density(t, x);
  }
  std::optional<double> log_weight_lower_bound() const override {
    return inner_.log_weight_lower_bound();
  }
  std::optional<Interval> oracle_support() const override { return inner_.oracle_support(); }

 private:
  void check_initial(double x, double log_w) const;
  void check_transition(std::size_t t, double prev, double x, double log_w) const;

  const FeynmanKacModel& inner_;
  bool check_bounds_;
  mutable std::atomic<std::uint64_t> initial_count_{0};
  mutable std::atomic<std::uint64_t> transition_count_{0};
};

/// A static target pi = gamma / Z with proposal q and weight w = gamma / q <= bound.
struct StaticTarget {
  std::function<double(double)> unnormalized_density;
  std::function<double(RngStream&)> sample_proposal;
  std::function<double(double)> weight;
  double bound = 0.0;
};

}  // namespace ers
