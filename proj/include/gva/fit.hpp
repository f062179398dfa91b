#pragma once

// Stochastic gradient fit loop: doubly stochastic variational inference in
// the covariance parameterization (Algorithm 1, mean-field or unrestricted)
// or the sparse precision parameterization (Algorithm 2), with ADADELTA
// steps, windowed lower-bound averaging, and the max-tracking stopping rule.

#include <cstdint>

#include "gva/adadelta.hpp"
#include "gva/estimators.hpp"
#include "gva/factor.hpp"
#include "gva/model.hpp"

namespace gva {

enum class Algorithm { alg1_meanfield, alg1_unrestricted, alg2_sparse };

enum class Termination { stopped_by_criterion, diverged, max_iterations };

const char* to_string(Algorithm a);
const char* to_string(Termination t);
bool algorithm_from_string(std::string_view name, Algorithm& out);
bool termination_from_string(std::string_view name, Termination& out);

struct FitConfig {
  Algorithm algorithm = Algorithm::alg2_sparse;
  Estimator estimator = Estimator::family2;
  std::int64_t max_iterations = 100000;  // N
  std::int64_t window = 2500;            // F
  int patience = 3;                      // M
  std::uint64_t rng_seed = 1;
  int draws_per_iter = 1;
  double adadelta_rho = 0.95;
  double adadelta_eps = 1e-6;

  void validate() const;  // F >= 1, M >= 1, N >= F, draws >= 1
};

// Full mutable state of one fit. The factor's diagonal always equals
// exp of tprime's diagonal entries; the pattern never changes.
struct VariationalState {
  DenseVector mu;
  CholeskyFactor factor;
  DenseVector tprime;
  AdadeltaAccumulator mu_acc;
  AdadeltaAccumulator factor_acc;

  static VariationalState initial(PatternPtr pattern, double rho, double eps);

  // tprime += delta, then refresh the factor (off-diagonals copied,
  // diagonal re-exponentiated).
  void apply_factor_delta(std::span<const double> delta);
};

struct FitResult {
  DenseVector mu;
  CholeskyFactor factor;
  bool precision;  // true: factor is T (precision); false: factor is L (covariance)
  std::vector<double> lbar_trace;
  Termination termination = Termination::max_iterations;
  std::int64_t iterations_used = 0;
  std::uint64_t rng_seed = 0;
  Algorithm algorithm = Algorithm::alg2_sparse;
  Estimator estimator = Estimator::family2;
  std::int64_t window = 2500;
  int patience = 3;
};

// Max-tracking stopping rule: stop after `patience` consecutive windows whose
// average falls below the running maximum. A new maximum resets the counter.
class StoppingRule {
 public:
  explicit StoppingRule(int patience);

  // Returns true when the rule fires. Non-finite values count as below-max.
  bool observe(double lbar);

  double lbar_max() const { return lbar_max_; }
  int consecutive_below() const { return below_; }

 private:
  double lbar_max_;
  int below_ = 0;
  int patience_;
};

// Applies the rule to a synthetic trace; returns the 1-based window index at
// which it fires, or -1 if it never does.
int stopping_fires_at(std::span<const double> trace, int patience);

// Distinguishes ordinary convergence from divergence once the stopping rule
// has fired: diverged when the trace ends non-finite, or when each of the
// last `patience` window-to-window changes is a fall of more than 10x the
// baseline window-to-window standard deviation.
Termination classify_termination(std::span<const double> trace, int patience);

FitResult run_fit(const TargetModel& model, const FitConfig& config);

}  // namespace gva
