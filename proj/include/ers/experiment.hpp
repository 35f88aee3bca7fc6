#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ers/model.hpp"

namespace ers {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Estimator { ratio_mean, frequency, both };

Estimator parse_estimator(const std::string& name);
std::string estimator_name(Estimator e);

/// One experiment: a model instance, an ensemble size and a sampling budget.
/// Model parameters left unset take the model's defaults.
struct ExperimentConfig {
  std::string model = "conditioned-rw";  // conditioned-rw | nonlinear-ar | stoch-vol | finite-state
  std::size_t horizon = 100;
  std::optional<std::size_t> n;  // absolute ensemble size
  std::optional<double> beta;    // or N = ceil(beta * T)
  std::size_t num_samples = 500;
  Estimator estimator = Estimator::ratio_mean;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> data;  // observation CSV
  std::uint64_t data_seed = 7;                // synthetic data when no CSV is given
  bool extended = false;
  bool timing = true;
  /// Adds a row for the competitor that runs N independent standard RS
  /// proposals and succeeds if any is accepted: 1 - (1 - p_RS)^N.
  bool rs_baseline = false;
  std::optional<std::size_t> states;  // finite-state model size; tables drawn from data_seed

  std::optional<double> phi;
  std::optional<double> sigma;
  std::optional<double> sigma_v;
  std::optional<double> sigma_w;
  std::optional<double> vol_scale;  // beta of the stochastic volatility model
  std::optional<double> support_low;
  std::optional<double> support_high;
  std::optional<double> drift_slope;
  std::optional<double> drift_intercept;
};

/// N^2 T num_samples above which a run needs `extended`.
inline constexpr double kDeskScaleBudget = 5e10;

std::size_t resolve_ensemble_size(const ExperimentConfig& config);

/// Builds the model, reading or simulating observations as configured.
std::unique_ptr<FeynmanKacModel> build_model(const ExperimentConfig& config);

/// Checks the configuration, including the desk-scale budget gate.
void validate(const ExperimentConfig& config);

struct ResultRow {
  std::string model;
  std::size_t horizon = 0;
  std::size_t n = 0;
  std::string estimator;
  double p_ers_percent = 0.0;
  double std_error_percent = 0.0;
  std::size_t num_samples = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
};

std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

inline constexpr const char* kResultHeader =
    "model,T,N,estimator,p_ers_percent,std_error,num_samples,seed,wall_time_s";

/// Writes the header and one line per row. With timing off, wall_time_s is
/// written as 0 so identical runs produce identical bytes.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool timing);

/// Writes `count` accepted paths, one row each: `path,status,trials,x1..xT`.
/// Path p is drawn by ers_sample on its own stream; a path whose budget of
/// max_trials_per_path runs out is written with status `exhausted` and no
/// values. Returns the number of exhausted paths.
std::size_t emit_samples(const ExperimentConfig& config, std::size_t count, std::ostream& out,
                         std::optional<std::size_t> max_trials_per_path = std::nullopt);

}  // namespace ers
