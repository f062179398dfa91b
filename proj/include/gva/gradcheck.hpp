#pragma once

// Central finite-difference checking of hand-derived gradients, reported per
// named parameter block.

#include <string>
#include <vector>

#include "gva/model.hpp"
#include "gva/types.hpp"

namespace gva {

struct GradCheckBlock {
  std::string name;
  index_t begin = 0;  // [begin, end) in theta
  index_t end = 0;
};

struct GradCheckBlockReport {
  std::string name;
  double max_rel_error = 0.0;
  index_t worst_component = 0;  // 0-based theta index
};

struct GradCheckReport {
  std::vector<GradCheckBlockReport> blocks;
  double max_rel_error = 0.0;
  int points = 0;
  double step = 0.0;

  bool passes(double tol) const { return max_rel_error < tol; }
};

// Central differences of log_h with the given step at each of `points`
// standard-normal random points (scaled by `spread`), against grad_log_h.
// Relative error is |analytic - numeric| / max(1, |analytic|, |numeric|).
GradCheckReport gradcheck(const TargetModel& model, std::vector<GradCheckBlock> blocks,
                          int points, double step, std::uint64_t seed, double spread = 0.5);

// One block spanning all of theta.
std::vector<GradCheckBlock> whole_vector_block(index_t dim);

// Central-difference gradient at a single point (test oracle helper).
DenseVector finite_difference_gradient(const TargetModel& model, std::span<const double> theta,
                                       double step);

}  // namespace gva
