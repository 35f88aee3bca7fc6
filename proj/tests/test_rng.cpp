#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "ers/rng.hpp"
#include "ers/streams.hpp"

using ers::RngStream;

TEST_CASE("identical seed and stream reproduce the sequence") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
  RngStream c(42, 7);
  RngStream d(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("different seeds, streams and substreams diverge") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 50; ++s) {
    firsts.insert(RngStream(s, 0)());
    firsts.insert(RngStream(0, s + 1)());
    firsts.insert(RngStream(0, 0).substream(s)());
  }
  CHECK(firsts.size() == 150);
}

TEST_CASE("substream does not advance its parent") {
  RngStream a(3, 1);
  RngStream b(3, 1);
  (void)a.substream(ers::stream_role::kGrid);
  CHECK(a() == b());
  CHECK(a.substream(9)() == b.substream(9)());
}

TEST_CASE("uniform lies in [0, 1) with the right moments") {
  RngStream rng(11, 0);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  // se of the mean is sqrt(1/12 / n) ~ 6.5e-4
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum_sq / n - mean * mean - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("sibling substreams are uncorrelated") {
  const RngStream root(5, 0);
  RngStream a = root.substream(0);
  RngStream b = root.substream(1);
  const int n = 100000;
  double sab = 0.0;
  for (int i = 0; i < n; ++i) sab += (a.uniform() - 0.5) * (b.uniform() - 0.5);
  const double corr = sab / n * 12.0;
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("uniform_index covers the range") {
  RngStream rng(1, 2);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 5000; ++i) ++counts[rng.uniform_index(5)];
  for (int c : counts) CHECK(c > 850);
}
