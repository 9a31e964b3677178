#pragma once

#include "hjdirac/types.hpp"

#include <cstdint>
#include <random>

namespace hjdirac {

// Seedable generator with a fixed, platform-independent output sequence.
//
// The engine is std::mt19937_64, whose constants and output are pinned by the
// C++ standard. The standard library's distributions are implementation
// defined, so uniforms and normals are derived here by hand:
//   uniform()  = (next >> 11) * 2^-53               in [0, 1)
//   normal()   = Box-Muller on two uniforms, both outputs used in order
// Substreams: the engine for (seed, stream) is seeded with
//   splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// Uniform point in the box, components drawn in index order.
Point uniform_point(Rng& rng, const Box& box);

}  // namespace hjdirac
