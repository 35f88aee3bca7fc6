#include "ers/static_ers.hpp"

#include <cmath>
#include <stdexcept>

#include "ers/log_math.hpp"
#include "ers/streams.hpp"

namespace ers {

StaticTrial static_ers_trial(const StaticTarget& target, std::size_t n, const RngStream& rng) {
  if (n < 1) throw std::invalid_argument("ensemble size must be at least 1");
  if (!std::isfinite(target.bound)) throw std::invalid_argument("static target bound must be finite");

  RngStream proposals = rng.substream(stream_role::kProposal);
  std::vector<double> xs(n);
  std::vector<double> ws(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = target.sample_proposal(proposals);
    ws[i] = target.weight(xs[i]);
    total += ws[i];
  }

  StaticTrial trial;
  if (total <= 0.0) {
    trial.record.z_bar = target.bound / static_cast<double>(n);
    return trial;
  }

  RngStream selection = rng.substream(stream_role::kSelection);
  const std::size_t k = sample_categorical(ws, total, selection.uniform());

  // Both estimates share the sum over the non-selected members, so rounding
  // is monotone in the selected term and z_hat <= z_bar holds exactly.
  double rest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != k) rest += ws[i];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  trial.proposal = xs[k];
  trial.record.selected_index = k;
  trial.record.z_hat = (rest + ws[k]) * inv_n;
  trial.record.z_bar = (rest + target.bound) * inv_n;
  trial.record.ratio = trial.record.z_hat / trial.record.z_bar;

  RngStream acceptance = rng.substream(stream_role::kAcceptance);
  trial.record.accepted = acceptance.uniform() < trial.record.ratio;
  if (trial.record.accepted) trial.state = xs[k];
  return trial;
}

StaticSampleResult static_ers_sample(const StaticTarget& target, std::size_t n, const RngStream& rng,
                                     std::optional<std::size_t> max_trials) {
  StaticSampleResult result;
  for (std::size_t k = 0; !max_trials || k < *max_trials; ++k) {
    StaticTrial trial = static_ers_trial(target, n, rng.substream(k));
    result.records.push_back(trial.record);
    ++result.trials;
    if (trial.state) {
      result.state = trial.state;
      break;
    }
  }
  return result;
}

StaticRsTrial static_rs_trial(const StaticTarget& target, const RngStream& rng) {
  RngStream proposals = rng.substream(stream_role::kProposal);
  StaticRsTrial trial;
  trial.proposal = target.sample_proposal(proposals);
  trial.ratio = target.weight(trial.proposal) / target.bound;
  RngStream acceptance = rng.substream(stream_role::kAcceptance);
  if (acceptance.uniform() < trial.ratio) trial.state = trial.proposal;
  return trial;
}

StaticRsResult static_rs_sample(const StaticTarget& target, const RngStream& rng) {
  if (!std::isfinite(target.bound)) throw std::invalid_argument("static target bound must be finite");
  StaticRsResult result;
  for (std::size_t k = 0;; ++k) {
    const StaticRsTrial trial = static_rs_trial(target, rng.substream(k));
    ++result.trials;
    if (trial.state) {
      result.state = *trial.state;
      return result;
    }
  }
}

MeanEstimate mean_and_std_error(std::span<const double> values) {
  MeanEstimate est;
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / n;
  if (values.size() < 2) return est;
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  est.std_error = std::sqrt(ss / (n - 1.0) / n);
  return est;
}

MeanEstimate estimate_static_acceptance(const StaticTarget& target, std::size_t n,
                                        std::size_t num_samples, const RngStream& rng) {
  if (num_samples < 2) throw std::invalid_argument("need at least two samples for a standard error");
  std::vector<double> ratios(num_samples);
  for (std::size_t k = 0; k < num_samples; ++k) {
    ratios[k] = static_ers_trial(target, n, rng.substream(k)).record.ratio;
  }
  return mean_and_std_error(ratios);
}

}  // namespace ers
