#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace ers {

/// A seeded random stream identified by (seed, stream_id).
///
/// Identical pairs reproduce identical sequences bit-for-bit. Child streams
/// are derived by hashing a key into the stream id, so a trial can hand out
/// independent streams per role (grid column, selection, acceptance) without
/// sharing state. Streams are single-owner; copy one to replay it.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Independent child stream for `key`. Does not advance this stream.
  RngStream substream(std::uint64_t key) const;

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive stream ids and engine seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace ers
