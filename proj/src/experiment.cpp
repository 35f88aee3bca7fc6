#include "ers/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ers/dynamic_ers.hpp"
#include "ers/models/conditioned_rw.hpp"
#include "ers/models/finite_state.hpp"
#include "ers/models/nonlinear_ar.hpp"
#include "ers/models/observations.hpp"
#include "ers/models/stoch_vol.hpp"
#include "ers/parallel.hpp"

namespace ers {

namespace {

constexpr std::uint64_t kEstimateStream = 0;
constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kDataStream = 2;
constexpr std::uint64_t kBaselineStream = 3;

std::vector<double> load_or_simulate(const ExperimentConfig& config, auto simulate) {
  if (config.data) {
    std::vector<double> values = read_observations(*config.data);
    if (values.size() < config.horizon) {
      throw ConfigError("data file " + config.data->string() + " has " + std::to_string(values.size()) +
                        " observations but T=" + std::to_string(config.horizon));
    }
    values.resize(config.horizon);
    return values;
  }
  RngStream rng(config.data_seed, kDataStream);
  return simulate(rng).observations;
}

std::string format_row(const ResultRow& row, bool timing) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%s,%.4f,%.4f,%zu,%llu,%.3f\n", row.model.c_str(), row.horizon, row.n,
                row.estimator.c_str(), row.p_ers_percent, row.std_error_percent, row.num_samples,
                static_cast<unsigned long long>(row.seed), timing ? row.wall_time_s : 0.0);
  return buf;
}

}  // namespace

Estimator parse_estimator(const std::string& name) {
  if (name == "ratio-mean") return Estimator::ratio_mean;
  if (name == "frequency") return Estimator::frequency;
  if (name == "both") return Estimator::both;
  throw ConfigError("unknown estimator `" + name + "` (expected ratio-mean, frequency or both)");
}

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::ratio_mean: return "ratio-mean";
    case Estimator::frequency: return "frequency";
    case Estimator::both: return "both";
  }
  return "?";
}

std::size_t resolve_ensemble_size(const ExperimentConfig& config) {
  if (config.n && config.beta) throw ConfigError("give either N or beta, not both");
  if (config.n) {
    if (*config.n < 1) throw ConfigError("N must be at least 1");
    return *config.n;
  }
  if (config.beta) {
    if (!(*config.beta > 0.0)) throw ConfigError("beta must be positive");
    return static_cast<std::size_t>(std::ceil(*config.beta * static_cast<double>(config.horizon)));
  }
  throw ConfigError("ensemble size missing: set N or beta");
}

std::unique_ptr<FeynmanKacModel> build_model(const ExperimentConfig& config) {
  if (config.horizon < 1) throw ConfigError("T must be at least 1");
  try {
    if (config.model == "conditioned-rw") {
      ConditionedRandomWalkSpec spec;
      spec.horizon = config.horizon;
      spec.sigma = config.sigma.value_or(spec.sigma);
      spec.support_low = config.support_low.value_or(spec.support_low);
      spec.support_high = config.support_high.value_or(spec.support_high);
      spec.drift_slope = config.drift_slope.value_or(spec.drift_slope);
      spec.drift_intercept = config.drift_intercept.value_or(spec.drift_intercept);
      return std::make_unique<ConditionedRandomWalk>(spec);
    }
    if (config.model == "nonlinear-ar") {
      NonlinearArSpec spec;
      spec.phi = config.phi.value_or(spec.phi);
      spec.sigma_v = config.sigma_v.value_or(spec.sigma_v);
      spec.sigma_w = config.sigma_w.value_or(spec.sigma_w);
      spec.observations = load_or_simulate(
          config, [&](RngStream& rng) { return simulate_nonlinear_ar(spec, config.horizon, rng); });
      return std::make_unique<NonlinearAr>(std::move(spec));
    }
    if (config.model == "stoch-vol") {
      StochVolSpec spec;
      spec.phi = config.phi.value_or(spec.phi);
      spec.beta = config.vol_scale.value_or(spec.beta);
      spec.sigma = config.sigma.value_or(spec.sigma);
      spec.observations = load_or_simulate(
          config, [&](RngStream& rng) { return simulate_stoch_vol(spec, config.horizon, rng); });
      return std::make_unique<StochVol>(std::move(spec));
    }
    if (config.model == "finite-state") {
      const std::size_t states = config.states.value_or(4);
      if (states < 1) throw ConfigError("states must be at least 1");
      RngStream rng(config.data_seed, kDataStream);
      return std::make_unique<FiniteStateModel>(random_finite_state_spec(states, config.horizon, rng));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(config.model + ": " + e.what());
  } catch (const ObservationParseError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown model `" + config.model + "` (expected conditioned-rw, nonlinear-ar, stoch-vol or finite-state)");
}

void validate(const ExperimentConfig& config) {
  if (config.num_samples < 1) throw ConfigError("num_samples must be at least 1");
  if (config.workers < 1) throw ConfigError("workers must be at least 1");
  const auto n = static_cast<double>(resolve_ensemble_size(config));
  const double cost = n * n * static_cast<double>(config.horizon) * static_cast<double>(config.num_samples);
  if (cost > kDeskScaleBudget && !config.extended) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "run needs about %.2g weight evaluations; pass --extended to allow it", cost);
    throw ConfigError(buf);
  }
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  if (config.num_samples < 2) throw ConfigError("num_samples must be at least 2 for a standard error");
  const std::size_t n = resolve_ensemble_size(config);
  const auto model = build_model(config);

  const auto start = std::chrono::steady_clock::now();
  const AcceptanceEstimate est =
      estimate_acceptance(*model, n, config.num_samples, RngStream(config.seed, kEstimateStream), config.workers);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<ResultRow> rows;
  auto add = [&](Estimator e, double value, double se) {
    rows.push_back({config.model, config.horizon, n, estimator_name(e), 100.0 * value, 100.0 * se,
                    config.num_samples, config.seed, elapsed});
  };
  if (config.estimator != Estimator::frequency) add(Estimator::ratio_mean, est.mean_ratio, est.ratio_std_error);
  if (config.estimator != Estimator::ratio_mean) add(Estimator::frequency, est.frequency, est.frequency_std_error);
  if (config.rs_baseline) {
    // p_RS is the n = 1 ratio mean; the se follows by the delta method.
    const auto rs_start = std::chrono::steady_clock::now();
    const AcceptanceEstimate rs =
        estimate_acceptance(*model, 1, config.num_samples, RngStream(config.seed, kBaselineStream), config.workers);
    const double rs_elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - rs_start).count();
    const double nd = static_cast<double>(n);
    const double miss = 1.0 - rs.mean_ratio;
    const double value = 1.0 - std::pow(miss, nd);
    const double se = nd * std::pow(miss, nd - 1.0) * rs.ratio_std_error;
    rows.push_back({config.model, config.horizon, n, "rs-any-of-n", 100.0 * value, 100.0 * se,
                    config.num_samples, config.seed, rs_elapsed});
  }
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool timing) {
  out << kResultHeader << '\n';
  for (const auto& row : rows) out << format_row(row, timing);
}

std::size_t emit_samples(const ExperimentConfig& config, std::size_t count, std::ostream& out,
                         std::optional<std::size_t> max_trials_per_path) {
  if (config.workers < 1) throw ConfigError("workers must be at least 1");
  const std::size_t n = resolve_ensemble_size(config);
  const auto model = build_model(config);
  const RngStream root(config.seed, kSampleStream);

  std::vector<SampleOutcome> outcomes(count);
  for_each_index(count, config.workers, [&](std::size_t p) {
    SampleOutcome s = ers_sample(*model, n, root.substream(p), max_trials_per_path);
    s.records.clear();
    outcomes[p] = std::move(s);
  });

  out << "path,status,trials";
  for (std::size_t t = 1; t <= config.horizon; ++t) out << ",x" << t;
  out << '\n';
  std::size_t exhausted = 0;
  char buf[64];
  for (std::size_t p = 0; p < count; ++p) {
    const SampleOutcome& s = outcomes[p];
    out << p << ',' << (s.exhausted() ? "exhausted" : "accepted") << ',' << s.trials;
    if (s.exhausted()) {
      ++exhausted;
    } else {
      for (double x : *s.path) {
        std::snprintf(buf, sizeof buf, ",%.17g", x);
        out << buf;
      }
    }
    out << '\n';
  }
  return exhausted;
}

}  // namespace ers
