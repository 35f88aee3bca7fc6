#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ers/ensemble_hmm.hpp"
#include "ers/model.hpp"
#include "ers/rng.hpp"

namespace ers {

/// Diagnostics of one dynamic ERS trial.
struct TrialRecord {
  double log_z_hat = 0.0;
  double log_z_bar = 0.0;
  double ratio = 0.0;  // exp(log_z_hat - log_z_bar), in [0, 1]
  bool accepted = false;
  bool degenerate = false;  // zero-mass forward step; never accepted
  std::uint64_t stream_id = 0;
};

struct TrialOutcome {
  std::optional<std::vector<double>> path;  // set only when accepted
  TrialRecord record;
};

/// One pass of the dynamic scheme: grid, forward filter, backward sample,
/// bounding recursion, then a single uniform against Z_hat / Z_bar.
TrialOutcome ers_trial(const FeynmanKacModel& model, std::size_t n, const RngStream& rng);

struct SampleOutcome {
  std::optional<std::vector<double>> path;  // empty when the budget ran out
  std::size_t trials = 0;
  std::vector<TrialRecord> records;
  bool exhausted() const { return !path.has_value(); }
};

/// Runs ers_trial on rng.substream(k), k = 0, 1, ..., until a path is
/// accepted or max_trials trials have been spent.
SampleOutcome ers_sample(const FeynmanKacModel& model, std::size_t n, const RngStream& rng,
                         std::optional<std::size_t> max_trials = std::nullopt);

struct RsTrialOutcome {
  std::optional<std::vector<double>> path;
  double log_ratio = 0.0;
  bool accepted() const { return path.has_value(); }
};

/// Standard rejection sampling with proposal prod_t q_t. Uses the same
/// substreams as ers_trial, so with n = 1 both decide identically.
RsTrialOutcome standard_rs_trial(const FeynmanKacModel& model, const RngStream& rng);

struct AcceptanceEstimate {
  double mean_ratio = 0.0;  // the p_ERS estimator: mean of Z_hat / Z_bar
  double ratio_std_error = 0.0;
  double frequency = 0.0;  // fraction of trials accepted
  double frequency_std_error = 0.0;
  std::size_t num_samples = 0;
  std::size_t degenerate_trials = 0;
  std::vector<TrialRecord> records;  // indexed by trial
};

/// Estimates p_ERS from num_samples independent trials; trial i runs on
/// rng.substream(i) and records stream_id = i. Results do not depend on the
/// worker count.
AcceptanceEstimate estimate_acceptance(const FeynmanKacModel& model, std::size_t n,
                                       std::size_t num_samples, const RngStream& rng,
                                       std::size_t workers = 1);

/// Lower bound on p_ERS for models with weights in [w_lower, w_upper].
struct TheoryBounds {
  double delta = 1.0;             // (w_upper / w_lower)^2
  double lower_bound_pers = 1.0;  // (1 + (delta - 1) / N)^(-T)
};

class BoundUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws BoundUnavailable when the model declares no lower weight bound.
TheoryBounds theory_bounds(const FeynmanKacModel& model, std::size_t n);
/// The same bound from delta directly.
double theory_lower_bound(double delta, std::size_t n, std::size_t horizon);
/// Limit of the bound for N = ceil(beta T) as T grows: exp((1 - delta) / beta).
double theory_limit(double delta, double beta);

}  // namespace ers
