#pragma once

// Independent reference computations for the tests. Nothing here calls the
// ensemble kernel; everything is brute-force enumeration in linear space.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "ers/ensemble_hmm.hpp"
#include "ers/model.hpp"

namespace ers::test {

// Calls fn(indices) for every index vector in [0, n)^horizon, last index fastest.
inline void for_each_index_path(std::size_t n, std::size_t horizon,
                                const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(horizon, 0);
  while (true) {
    fn(idx);
    std::size_t t = horizon;
    while (t > 0) {
      --t;
      if (++idx[t] < n) break;
      idx[t] = 0;
      if (t == 0) return;
    }
    if (horizon == 0) return;
  }
}

inline double weight_of(const FeynmanKacModel& model, const EnsembleGrid& grid, const std::vector<std::size_t>& idx) {
  double w = std::exp(model.log_initial_weight(grid.state(idx[0], 0)));
  for (std::size_t t = 1; t < idx.size(); ++t) {
    w *= std::exp(model.log_transition_weight(t, grid.state(idx[t - 1], t - 1), grid.state(idx[t], t)));
  }
  return w;
}

// Z_hat = N^-T sum over all N^T grid paths of the path weight.
inline double brute_force_z_hat(const FeynmanKacModel& model, const EnsembleGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t horizon = grid.horizon();
  double total = 0.0;
  for_each_index_path(n, horizon, [&](const std::vector<std::size_t>& idx) { total += weight_of(model, grid, idx); });
  return total / std::pow(static_cast<double>(n), static_cast<double>(horizon));
}

// Z_bar: every factor touching a selected index replaced by its bound.
inline double brute_force_z_bar(const FeynmanKacModel& model, const EnsembleGrid& grid,
                                const std::vector<std::size_t>& selected) {
  const std::size_t n = grid.size();
  const std::size_t horizon = grid.horizon();
  double total = 0.0;
  for_each_index_path(n, horizon, [&](const std::vector<std::size_t>& idx) {
    double w = idx[0] == selected[0] ? std::exp(model.log_initial_bound())
                                     : std::exp(model.log_initial_weight(grid.state(idx[0], 0)));
    for (std::size_t t = 1; t < horizon; ++t) {
      const bool prev_sel = idx[t - 1] == selected[t - 1];
      const bool cur_sel = idx[t] == selected[t];
      const double prev = grid.state(idx[t - 1], t - 1);
      const double cur = grid.state(idx[t], t);
      double factor;
      if (prev_sel && cur_sel) {
        factor = model.log_transition_bound(t);
      } else if (cur_sel) {
        factor = model.has_partial_bounds() ? model.log_partial_bound_left(t, prev) : model.log_transition_bound(t);
      } else if (prev_sel) {
        factor = model.has_partial_bounds() ? model.log_partial_bound_right(t, cur) : model.log_transition_bound(t);
      } else {
        factor = model.log_transition_weight(t, prev, cur);
      }
      w *= std::exp(factor);
    }
    total += w;
  });
  return total / std::pow(static_cast<double>(n), static_cast<double>(horizon));
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

// Pearson goodness of fit; cells with expected count below 5 are pooled.
inline ChiSquareResult chi_square_test(const std::vector<double>& observed_counts,
                                       const std::vector<double>& probabilities) {
  double total = 0.0;
  for (double c : observed_counts) total += c;
  ChiSquareResult r;
  std::size_t cells = 0;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  for (std::size_t k = 0; k < observed_counts.size(); ++k) {
    const double expected = probabilities[k] * total;
    if (expected < 5.0) {
      pooled_obs += observed_counts[k];
      pooled_exp += expected;
      continue;
    }
    r.statistic += (observed_counts[k] - expected) * (observed_counts[k] - expected) / expected;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    r.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  } else if (pooled_obs > 0.0) {
    r.p_value = 0.0;  // mass where the reference has none
    return r;
  }
  if (cells < 2) return r;
  r.dof = cells - 1;
  r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(r.dof)), r.statistic));
  return r;
}

// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

// Asymptotic KS critical value sqrt(-log(alpha / 2) / 2) / sqrt(n).
inline double ks_critical_value(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

// Histogram of values into equal-width bins of [low, high).
inline std::vector<double> histogram(const std::vector<double>& values, double low, double high, std::size_t bins) {
  std::vector<double> counts(bins, 0.0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - low) / (high - low) * static_cast<double>(bins));
    if (b >= bins) b = bins - 1;
    counts[b] += 1.0;
  }
  return counts;
}

}  // namespace ers::test
