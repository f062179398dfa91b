#pragma once

// Seeded deterministic random number generation. The engine is the
// standardized mt19937_64, uniforms come from the top 53 bits, and normals
// use the Marsaglia polar transform, so identical seeds reproduce identical
// streams wherever libm's log/sqrt round identically.

#include <cstdint>
#include <random>
#include <span>

#include "gva/types.hpp"

namespace gva {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1).
  double uniform();

  // Standard normal variate.
  double normal();

  // Fills out with independent standard normals.
  void normal_vec(std::span<double> out);

  DenseVector normal_vec(index_t n);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gva
