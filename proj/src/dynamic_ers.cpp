#include "ers/dynamic_ers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ers/log_math.hpp"
#include "ers/parallel.hpp"
#include "ers/static_ers.hpp"
#include "ers/streams.hpp"

namespace ers {

TrialOutcome ers_trial(const FeynmanKacModel& model, std::size_t n, const RngStream& rng) {
  TrialOutcome outcome;
  TrialRecord& record = outcome.record;
  record.stream_id = rng.stream_id();

  const EnsembleGrid grid = sample_grid(model, n, rng);
  const ForwardFilterResult filters = forward_filter(model, grid);
  if (filters.degenerate()) {
    record.degenerate = true;
    record.log_z_hat = kNegInf;
    record.log_z_bar = std::numeric_limits<double>::quiet_NaN();  // not computed
    return outcome;
  }

  RngStream selection = rng.substream(stream_role::kSelection);
  ProposalDraw draw = backward_sample(model, grid, filters, selection);
  const BoundResult bound = bounding_recursion(model, grid, draw);

  record.log_z_hat = filters.log_z_hat;
  record.log_z_bar = bound.log_z_bar;
  record.ratio = std::exp(acceptance_log_ratio(filters, bound));
  RngStream acceptance = rng.substream(stream_role::kAcceptance);
  record.accepted = acceptance.uniform() < record.ratio;
  if (record.accepted) outcome.path = std::move(draw.path);
  return outcome;
}

SampleOutcome ers_sample(const FeynmanKacModel& model, std::size_t n, const RngStream& rng,
                         std::optional<std::size_t> max_trials) {
  SampleOutcome result;
  for (std::size_t k = 0; !max_trials || k < *max_trials; ++k) {
    TrialOutcome trial = ers_trial(model, n, rng.substream(k));
    result.records.push_back(trial.record);
    ++result.trials;
    if (trial.path) {
      result.path = std::move(trial.path);
      break;
    }
  }
  return result;
}

RsTrialOutcome standard_rs_trial(const FeynmanKacModel& model, const RngStream& rng) {
  const std::size_t horizon = model.horizon();
  const RngStream columns = rng.substream(stream_role::kGrid);
  std::vector<double> path(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    RngStream stream = columns.substream(t);
    path[t] = model.sample_proposal(t, stream);
  }

  double log_w = model.log_initial_weight(path[0]);
  double log_bound = model.log_initial_bound();
  for (std::size_t t = 1; t < horizon; ++t) {
    log_w += model.log_transition_weight(t, path[t - 1], path[t]);
    log_bound += model.log_transition_bound(t);
  }

  RsTrialOutcome outcome;
  outcome.log_ratio = log_w == kNegInf ? kNegInf : std::min(0.0, log_w - log_bound);
  RngStream acceptance = rng.substream(stream_role::kAcceptance);
  if (acceptance.uniform() < std::exp(outcome.log_ratio)) outcome.path = std::move(path);
  return outcome;
}

AcceptanceEstimate estimate_acceptance(const FeynmanKacModel& model, std::size_t n,
                                       std::size_t num_samples, const RngStream& rng,
                                       std::size_t workers) {
  if (num_samples < 2) throw std::invalid_argument("need at least two samples for a standard error");
  AcceptanceEstimate est;
  est.num_samples = num_samples;
  est.records.resize(num_samples);
  for_each_index(num_samples, workers, [&](std::size_t i) {
    est.records[i] = ers_trial(model, n, rng.substream(i)).record;
    est.records[i].stream_id = i;
  });

  std::vector<double> ratios(num_samples);
  std::vector<double> accepts(num_samples);
  for (std::size_t i = 0; i < num_samples; ++i) {
    ratios[i] = est.records[i].ratio;
    accepts[i] = est.records[i].accepted ? 1.0 : 0.0;
    if (est.records[i].degenerate) ++est.degenerate_trials;
  }
  const MeanEstimate ratio = mean_and_std_error(ratios);
  const MeanEstimate freq = mean_and_std_error(accepts);
  est.mean_ratio = ratio.mean;
  est.ratio_std_error = ratio.std_error;
  est.frequency = freq.mean;
  est.frequency_std_error = freq.std_error;
  return est;
}

double theory_lower_bound(double delta, std::size_t n, std::size_t horizon) {
  if (delta < 1.0) throw std::invalid_argument("delta must be at least 1");
  return std::exp(-static_cast<double>(horizon) * std::log1p((delta - 1.0) / static_cast<double>(n)));
}

double theory_limit(double delta, double beta) { return std::exp((1.0 - delta) / beta); }

TheoryBounds theory_bounds(const FeynmanKacModel& model, std::size_t n) {
  const auto log_lower = model.log_weight_lower_bound();
  if (!log_lower) throw BoundUnavailable("model declares no lower weight bound");
  double log_upper = model.log_initial_bound();
  for (std::size_t t = 1; t < model.horizon(); ++t) {
    log_upper = std::max(log_upper, model.log_transition_bound(t));
  }
  TheoryBounds bounds;
  bounds.delta = std::exp(2.0 * (log_upper - *log_lower));
  bounds.lower_bound_pers = theory_lower_bound(bounds.delta, n, model.horizon());
  return bounds;
}

}  // namespace ers
