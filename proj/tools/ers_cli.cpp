// Command-line front end: estimate acceptance probabilities, draw exact
// samples, or write synthetic observation files.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ers/experiment.hpp"
#include "ers/models/nonlinear_ar.hpp"
#include "ers/models/observations.hpp"
#include "ers/models/stoch_vol.hpp"

namespace {

void add_model_options(CLI::App& cmd, ers::ExperimentConfig& cfg, std::optional<std::size_t>& n_opt,
                       std::optional<double>& beta_opt, std::string& data_path) {
  cmd.add_option("--model", cfg.model, "conditioned-rw | nonlinear-ar | stoch-vol | finite-state")->capture_default_str();
  cmd.add_option("--t", cfg.horizon, "Horizon T")->capture_default_str();
  cmd.add_option("--n", n_opt, "Ensemble size N");
  cmd.add_option("--beta", beta_opt, "Ensemble size as N = ceil(beta * T)");
  cmd.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  cmd.add_option("--data", data_path, "Observation CSV (index,value); synthetic data if omitted");
  cmd.add_option("--data-seed", cfg.data_seed, "Seed for synthetic observations")->capture_default_str();
  cmd.add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  cmd.add_option("--phi", cfg.phi, "phi (nonlinear-ar, stoch-vol)");
  cmd.add_option("--sigma", cfg.sigma, "sigma (conditioned-rw, stoch-vol)");
  cmd.add_option("--sigma-v", cfg.sigma_v, "State noise (nonlinear-ar)");
  cmd.add_option("--sigma-w", cfg.sigma_w, "Observation noise (nonlinear-ar)");
  cmd.add_option("--vol-scale", cfg.vol_scale, "beta of the stochastic volatility model");
  cmd.add_option("--support-low", cfg.support_low, "Lower end of S (conditioned-rw)");
  cmd.add_option("--support-high", cfg.support_high, "Upper end of S (conditioned-rw)");
  cmd.add_option("--drift-slope", cfg.drift_slope, "psi(x) = slope * x + intercept (conditioned-rw)");
  cmd.add_option("--drift-intercept", cfg.drift_intercept, "psi(x) = slope * x + intercept (conditioned-rw)");
  cmd.add_option("--states", cfg.states, "State count (finite-state; tables drawn from --data-seed)");
}

void finish(ers::ExperimentConfig& cfg, const std::optional<std::size_t>& n_opt,
            const std::optional<double>& beta_opt, const std::string& data_path) {
  cfg.n = n_opt;
  cfg.beta = beta_opt;
  if (!data_path.empty()) cfg.data = data_path;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ers::ConfigError("cannot open output file " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ensemble rejection sampling for state-space models"};
  app.set_config("--config", "", "Key-value config file; sections name the subcommand");
  app.require_subcommand(1);

  ers::ExperimentConfig cfg;
  std::optional<std::size_t> n_opt;
  std::optional<double> beta_opt;
  std::string data_path;
  std::string out_path;
  std::string estimator = "ratio-mean";
  bool no_timing = false;

  auto* estimate = app.add_subcommand("estimate", "Estimate the average acceptance probability");
  add_model_options(*estimate, cfg, n_opt, beta_opt, data_path);
  estimate->add_option("--samples", cfg.num_samples, "Number of trials")->capture_default_str();
  estimate->add_option("--estimator", estimator, "ratio-mean | frequency | both")->capture_default_str();
  estimate->add_option("--out", out_path, "Output CSV (stdout if omitted)");
  estimate->add_flag("--extended", cfg.extended, "Allow runs beyond the desk-scale budget");
  estimate->add_flag("--rs-baseline", cfg.rs_baseline, "Add a row for N independent standard RS runs");
  estimate->add_flag("--no-timing", no_timing, "Write wall_time_s as 0 for byte-reproducible output");

  std::size_t count = 1;
  std::optional<std::size_t> max_trials;
  auto* sample = app.add_subcommand("sample", "Draw exact posterior paths");
  add_model_options(*sample, cfg, n_opt, beta_opt, data_path);
  sample->add_option("--count", count, "Number of paths")->capture_default_str();
  sample->add_option("--max-trials", max_trials, "Trial budget per path");
  sample->add_option("--out", out_path, "Output CSV (stdout if omitted)");

  std::size_t sim_t = 100;
  std::uint64_t sim_seed = 1;
  std::string sim_model = "nonlinear-ar";
  auto* simulate = app.add_subcommand("simulate", "Write synthetic observations as index,value CSV");
  simulate->add_option("--model", sim_model, "nonlinear-ar | stoch-vol")->capture_default_str();
  simulate->add_option("--t", sim_t, "Number of observations")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Seed")->capture_default_str();
  simulate->add_option("--out", out_path, "Output CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream file;
    if (*estimate) {
      finish(cfg, n_opt, beta_opt, data_path);
      cfg.estimator = ers::parse_estimator(estimator);
      cfg.timing = !no_timing;
      const auto rows = ers::run_experiment(cfg);
      ers::write_results_csv(open_output(out_path, file), rows, cfg.timing);
    } else if (*sample) {
      finish(cfg, n_opt, beta_opt, data_path);
      const std::size_t exhausted = ers::emit_samples(cfg, count, open_output(out_path, file), max_trials);
      if (exhausted > 0) {
        std::cerr << exhausted << " of " << count << " paths exhausted their trial budget\n";
        return 3;
      }
    } else if (*simulate) {
      ers::RngStream rng(sim_seed, 2);
      ers::SimulatedData data;
      if (sim_model == "nonlinear-ar") {
        data = ers::simulate_nonlinear_ar(ers::NonlinearArSpec{}, sim_t, rng);
      } else if (sim_model == "stoch-vol") {
        data = ers::simulate_stoch_vol(ers::StochVolSpec{}, sim_t, rng);
      } else {
        throw ers::ConfigError("simulate supports nonlinear-ar and stoch-vol");
      }
      ers::write_observations(open_output(out_path, file), data.observations);
    }
  } catch (const ers::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
