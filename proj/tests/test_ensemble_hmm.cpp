#include <doctest.h>

#include <cmath>
#include <vector>

#include "ers/ensemble_hmm.hpp"
#include "ers/models/conditioned_rw.hpp"
#include "ers/models/finite_state.hpp"
#include "ers/models/nonlinear_ar.hpp"
#include "support/oracles.hpp"
#include "support/toy_models.hpp"

using namespace ers;

namespace {

ProposalDraw draw_at(const EnsembleGrid& grid, const std::vector<std::size_t>& indices) {
  ProposalDraw d;
  d.indices = indices;
  for (std::size_t t = 0; t < indices.size(); ++t) d.path.push_back(grid.state(indices[t], t));
  return d;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ConditionedRandomWalk tilted_walk(std::size_t horizon) {
  ConditionedRandomWalkSpec spec;
  spec.horizon = horizon;
  spec.drift_slope = 0.6;
  spec.drift_intercept = 0.5;
  spec.sigma = 0.3;
  return ConditionedRandomWalk(spec);
}

}  // namespace

TEST_CASE("sample_grid has shape N x T and is reproducible") {
  const ConditionedRandomWalk model = tilted_walk(7);
  const EnsembleGrid a = sample_grid(model, 5, RngStream(3, 4));
  const EnsembleGrid b = sample_grid(model, 5, RngStream(3, 4));
  CHECK(a.size() == 5);
  CHECK(a.horizon() == 7);
  CHECK(a.states == b.states);
  CHECK((a.states.array() >= 0.0).all());
  CHECK((a.states.array() <= 1.0).all());
  const EnsembleGrid one = sample_grid(model, 1, RngStream(1, 1));
  CHECK(one.size() == 1);
  CHECK_THROWS_AS(sample_grid(model, 0, RngStream(1, 1)), std::invalid_argument);
}

TEST_CASE("forward filter with one member reproduces the path weight") {
  const ConditionedRandomWalk model = tilted_walk(6);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const EnsembleGrid grid = sample_grid(model, 1, RngStream(s, 0));
    std::vector<double> path(6);
    for (std::size_t t = 0; t < 6; ++t) path[t] = grid.state(0, t);
    const ForwardFilterResult f = forward_filter(model, grid);
    CHECK(f.log_z_hat == doctest::Approx(evaluate_path_weight(model, path).log_weight).epsilon(1e-13));
  }
}

TEST_CASE("with T = 1 z_hat is the ensemble mean of w_1") {
  const test::FactorizedToy model(1, 0.4);
  const EnsembleGrid grid = sample_grid(model, 9, RngStream(2, 0));
  double mean = 0.0;
  for (std::size_t i = 0; i < 9; ++i) mean += std::exp(model.log_initial_weight(grid.state(i, 0))) / 9.0;
  CHECK(std::exp(forward_filter(model, grid).log_z_hat) == doctest::Approx(mean).epsilon(1e-13));
}

TEST_CASE("filters are probability vectors") {
  const ConditionedRandomWalk model = tilted_walk(30);
  const EnsembleGrid grid = sample_grid(model, 40, RngStream(5, 5));
  const ForwardFilterResult f = forward_filter(model, grid);
  REQUIRE_FALSE(f.degenerate());
  for (std::size_t t = 0; t < 30; ++t) {
    const Eigen::VectorXd p = f.filter(t);
    CHECK(std::abs(p.sum() - 1.0) < 1e-12);
    CHECK((p.array() >= 0.0).all());
  }
}

TEST_CASE("forward pass evaluates exactly N + (T-1) N^2 weights") {
  const ConditionedRandomWalk model = tilted_walk(9);
  for (std::size_t n : {1, 2, 63, 64, 65, 130}) {
    InstrumentedModel counted(model);
    const EnsembleGrid grid = sample_grid(model, n, RngStream(1, n));
    (void)forward_filter(counted, grid);
    CHECK(counted.total_evaluations() == n + 8 * n * n);
  }
}

TEST_CASE("z_hat and z_bar equal their brute-force sums") {
  RngStream rng(2024, 0);
  int cases = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t horizon = 1; horizon <= 5; ++horizon) {
      if (std::pow(static_cast<double>(n), static_cast<double>(horizon)) > 2e4) continue;
      const FiniteStateModel fs(random_finite_state_spec(3, horizon, rng, 0.05, 1.0, true));
      const ConditionedRandomWalk crw = tilted_walk(horizon);
      NonlinearArSpec nl_spec;
      for (std::size_t t = 0; t < horizon; ++t) nl_spec.observations.push_back(rng.normal());
      const NonlinearAr nl(nl_spec);
      for (const FeynmanKacModel* model : std::initializer_list<const FeynmanKacModel*>{&fs, &crw, &nl}) {
        const EnsembleGrid grid = sample_grid(*model, n, rng.substream(cases));
        const ForwardFilterResult f = forward_filter(*model, grid);
        const double z_hat = test::brute_force_z_hat(*model, grid);
        CHECK(rel_err(std::exp(f.log_z_hat), z_hat) < 1e-10);
        std::vector<std::size_t> sel(horizon);
        for (auto& k : sel) k = rng.uniform_index(n);
        const BoundResult b = bounding_recursion(*model, grid, draw_at(grid, sel));
        CHECK(rel_err(std::exp(b.log_z_bar), test::brute_force_z_bar(*model, grid, sel)) < 1e-10);
        CHECK(b.log_z_bar >= f.log_z_hat);
        ++cases;
      }
    }
  }
  CHECK(cases > 40);
}

TEST_CASE("one member: the bounding recursion is the product of bounds") {
  const ConditionedRandomWalk model = tilted_walk(5);
  const EnsembleGrid grid = sample_grid(model, 1, RngStream(9, 9));
  const BoundResult b = bounding_recursion(model, grid, draw_at(grid, {0, 0, 0, 0, 0}));
  CHECK(b.log_z_bar == doctest::Approx(model.log_initial_bound() + 4.0 * model.log_transition_bound(1)).epsilon(1e-14));
}

TEST_CASE("weights at their bounds give z_hat = z_bar") {
  const test::ConstantModel model(6, 0.3, 0.3);
  const EnsembleGrid grid = sample_grid(model, 11, RngStream(4, 2));
  const ForwardFilterResult f = forward_filter(model, grid);
  RngStream rng(4, 3);
  const ProposalDraw d = backward_sample(model, grid, f, rng);
  const BoundResult b = bounding_recursion(model, grid, d);
  CHECK(acceptance_log_ratio(f, b) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
}

TEST_CASE("backward sampling follows the embedded posterior over 27 index paths") {
  const ConditionedRandomWalk model = tilted_walk(3);
  const EnsembleGrid grid = sample_grid(model, 3, RngStream(31, 0));
  const ForwardFilterResult f = forward_filter(model, grid);
  std::vector<double> probs;
  double total = 0.0;
  test::for_each_index_path(3, 3, [&](const std::vector<std::size_t>& idx) {
    probs.push_back(test::weight_of(model, grid, idx));
    total += probs.back();
  });
  for (double& p : probs) p /= total;
  std::vector<double> counts(27, 0.0);
  const RngStream root(31, 1);
  for (std::size_t s = 0; s < 100000; ++s) {
    RngStream rng = root.substream(s);
    const ProposalDraw d = backward_sample(model, grid, f, rng);
    REQUIRE(d.path[1] == grid.state(d.indices[1], 1));
    counts[d.indices[0] * 9 + d.indices[1] * 3 + d.indices[2]] += 1.0;
  }
  CHECK(test::chi_square_test(counts, probs).p_value > 1e-3);
}

TEST_CASE("one member: backward sampling returns index 0 everywhere") {
  const ConditionedRandomWalk model = tilted_walk(4);
  const EnsembleGrid grid = sample_grid(model, 1, RngStream(8, 0));
  const ForwardFilterResult f = forward_filter(model, grid);
  if (!f.degenerate()) {
    RngStream rng(8, 1);
    const ProposalDraw d = backward_sample(model, grid, f, rng);
    CHECK(d.indices == std::vector<std::size_t>{0, 0, 0, 0});
  }
}

TEST_CASE("z_hat never exceeds z_bar on random grids") {
  const ConditionedRandomWalk model = tilted_walk(25);
  ConditionedRandomWalkSpec id_spec;
  id_spec.horizon = 25;
  const ConditionedRandomWalk identity(id_spec);
  for (const FeynmanKacModel* m : std::initializer_list<const FeynmanKacModel*>{&model, &identity}) {
    for (std::uint64_t s = 0; s < 300; ++s) {
      const EnsembleGrid grid = sample_grid(*m, 20, RngStream(s, 7));
      const ForwardFilterResult f = forward_filter(*m, grid);
      if (f.degenerate()) continue;
      RngStream rng(s, 8);
      const BoundResult b = bounding_recursion(*m, grid, backward_sample(*m, grid, f, rng));
      REQUIRE(f.log_z_hat <= b.log_z_bar);
    }
  }
}

TEST_CASE("a zero-mass step is reported as degenerate") {
  FiniteStateSpec spec;
  spec.state_count = 2;
  spec.horizon = 3;
  spec.initial = Eigen::Vector2d(1.0, 1.0);
  spec.transitions = {Eigen::Matrix2d::Zero()};
  const FiniteStateModel model(spec);
  const EnsembleGrid grid = sample_grid(model, 4, RngStream(1, 0));
  const ForwardFilterResult f = forward_filter(model, grid);
  REQUIRE(f.degenerate());
  CHECK(*f.degenerate_step == 1);
  CHECK(f.log_z_hat == kNegInf);
  BoundResult b;
  CHECK(acceptance_log_ratio(f, b) == kNegInf);
  RngStream rng(1, 1);
  CHECK_THROWS_AS(backward_sample(model, grid, f, rng), std::invalid_argument);
}

TEST_CASE("mismatched shapes are rejected") {
  const ConditionedRandomWalk model = tilted_walk(4);
  const ConditionedRandomWalk longer = tilted_walk(5);
  const EnsembleGrid grid = sample_grid(longer, 3, RngStream(1, 0));
  CHECK_THROWS_AS(forward_filter(model, grid), std::invalid_argument);
  CHECK_THROWS_AS(bounding_recursion(longer, grid, draw_at(grid, {0, 1})), std::invalid_argument);
}
