#pragma once

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace ams {

// A sequential random stream. One per AMS realization; never shared between threads.
//
// Streams are derived from (master seed, realization index) through std::seed_seq, so the
// i-th realization of a batch sees the same numbers no matter which worker runs it. Normals come
// from Boost's ziggurat sampler, whose output is specified independently of the standard
// library implementation.
class Stream {
public:
  using engine_type = boost::random::mt19937_64;

  explicit Stream(std::uint64_t seed) : Stream(seed, 0) {}

  Stream(std::uint64_t master_seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32),
                      0x616d73u};
    engine_.seed(seq);
  }

  static Stream derive(std::uint64_t master_seed, std::uint64_t index) {
    return Stream(master_seed, index);
  }

  double normal() { return normal_(engine_); }

  void fill_normal(std::span<double> out) {
    for (double& z : out) z = normal_(engine_);
  }

  double uniform() { return uniform_(engine_); }

  // Uniform integer in [0, n).
  std::size_t index_below(std::size_t n) {
    return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  engine_type& engine() noexcept { return engine_; }

private:
  engine_type engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
  boost::random::uniform_01<double> uniform_;
};

}  // namespace ams
