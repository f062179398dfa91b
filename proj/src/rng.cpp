#include "gva/rng.hpp"

#include <cmath>

namespace gva {

double Rng::uniform() {
  // top 53 bits -> (0, 1); offset by half an ulp so 0 is excluded
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, r2;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    r2 = u * u + v * v;
  } while (r2 >= 1.0 || r2 == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_ = v * scale;
  have_spare_ = true;
  return u * scale;
}

void Rng::normal_vec(std::span<double> out) {
  for (double& x : out) x = normal();
}

DenseVector Rng::normal_vec(index_t n) {
  DenseVector out(static_cast<std::size_t>(n));
  normal_vec(std::span<double>(out));
  return out;
}

}  // namespace gva
