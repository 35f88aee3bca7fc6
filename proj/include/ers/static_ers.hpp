#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ers/model.hpp"
#include "ers/rng.hpp"

namespace ers {

/// Diagnostics for one static ERS trial. z_hat <= z_bar holds exactly.
struct StaticTrialRecord {
  double z_hat = 0.0;
  double z_bar = 0.0;
  double ratio = 0.0;
  bool accepted = false;
  /// Empty when every ensemble weight was zero.
  std::optional<std::size_t> selected_index;
  bool all_zero() const { return !selected_index.has_value(); }
};

struct StaticTrial {
  std::optional<double> state;  // set only when accepted
  double proposal = 0.0;        // the selected ensemble member
  StaticTrialRecord record;
};

/// One pass of static ERS: draw an ensemble of n proposals, select one with
/// probability proportional to its weight, and accept it with probability
/// z_hat / z_bar, where z_bar replaces the selected weight by the bound.
StaticTrial static_ers_trial(const StaticTarget& target, std::size_t n, const RngStream& rng);

struct StaticSampleResult {
  std::optional<double> state;  // empty when the trial budget ran out
  std::size_t trials = 0;
  std::vector<StaticTrialRecord> records;
  bool exhausted() const { return !state.has_value(); }
};

/// Repeats static_ers_trial (trial k on rng.substream(k)) until acceptance or
/// until max_trials trials have been run.
StaticSampleResult static_ers_sample(const StaticTarget& target, std::size_t n, const RngStream& rng,
                                     std::optional<std::size_t> max_trials = std::nullopt);

/// Single trial of von Neumann rejection sampling; consumes its streams the
/// same way static_ers_trial does with n = 1.
struct StaticRsTrial {
  std::optional<double> state;
  double proposal = 0.0;
  double ratio = 0.0;
};
StaticRsTrial static_rs_trial(const StaticTarget& target, const RngStream& rng);

struct StaticRsResult {
  double state = 0.0;
  std::size_t trials = 0;
};
StaticRsResult static_rs_sample(const StaticTarget& target, const RngStream& rng);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of p_ERS = E[z_hat / z_bar] over num_samples trials.
MeanEstimate estimate_static_acceptance(const StaticTarget& target, std::size_t n,
                                        std::size_t num_samples, const RngStream& rng);

/// Mean and standard error of the mean of a sample.
MeanEstimate mean_and_std_error(std::span<const double> values);

}  // namespace ers
