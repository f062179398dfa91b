#include "gva/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gva/kernels.hpp"
#include "gva/rng.hpp"

namespace gva {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDiagFloor = 1e-30;
}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::alg1_meanfield: return "alg1-mf";
    case Algorithm::alg1_unrestricted: return "alg1-full";
    case Algorithm::alg2_sparse: return "alg2";
  }
  return "?";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::stopped_by_criterion: return "stopped-by-criterion";
    case Termination::diverged: return "diverged";
    case Termination::max_iterations: return "max-iterations";
  }
  return "?";
}

bool algorithm_from_string(std::string_view name, Algorithm& out) {
  if (name == "alg1-mf") {
    out = Algorithm::alg1_meanfield;
  } else if (name == "alg1-full") {
    out = Algorithm::alg1_unrestricted;
  } else if (name == "alg2") {
    out = Algorithm::alg2_sparse;
  } else {
    return false;
  }
  return true;
}

bool termination_from_string(std::string_view name, Termination& out) {
  if (name == "stopped-by-criterion") {
    out = Termination::stopped_by_criterion;
  } else if (name == "diverged") {
    out = Termination::diverged;
  } else if (name == "max-iterations") {
    out = Termination::max_iterations;
  } else {
    return false;
  }
  return true;
}

void FitConfig::validate() const {
  if (window < 1) throw std::invalid_argument("FitConfig: window must be >= 1");
  if (patience < 1) throw std::invalid_argument("FitConfig: patience must be >= 1");
  if (max_iterations < window)
    throw std::invalid_argument("FitConfig: max_iterations must be >= window");
  if (draws_per_iter < 1) throw std::invalid_argument("FitConfig: draws_per_iter must be >= 1");
}

VariationalState VariationalState::initial(PatternPtr pattern, double rho, double eps) {
  const std::size_t d = static_cast<std::size_t>(pattern->dim());
  const std::size_t nnz = static_cast<std::size_t>(pattern->nnz());
  return VariationalState{DenseVector(d, 0.0), CholeskyFactor::identity(std::move(pattern)),
                          DenseVector(nnz, 0.0), AdadeltaAccumulator(d, rho, eps),
                          AdadeltaAccumulator(nnz, rho, eps)};
}

void VariationalState::apply_factor_delta(std::span<const double> delta) {
  kernels::axpy(1.0, delta, tprime);
  const SparsityPattern& p = factor.pattern();
  auto values = factor.values();
  std::copy(tprime.begin(), tprime.end(), values.begin());
  for (index_t j = 0; j < p.dim(); ++j) {
    const std::size_t e = static_cast<std::size_t>(p.diag_pos(j));
    values[e] = std::exp(tprime[e]);
  }
}

StoppingRule::StoppingRule(int patience) : lbar_max_(-kInf), patience_(patience) {
  if (patience < 1) throw std::invalid_argument("StoppingRule: patience must be >= 1");
}

bool StoppingRule::observe(double lbar) {
  if (std::isfinite(lbar) && lbar >= lbar_max_) {
    // equal to the running max counts as not below
    if (lbar > lbar_max_) lbar_max_ = lbar;
    below_ = 0;
    return false;
  }
  ++below_;
  return below_ >= patience_;
}

int stopping_fires_at(std::span<const double> trace, int patience) {
  StoppingRule rule(patience);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (rule.observe(trace[i])) return static_cast<int>(i) + 1;
  }
  return -1;
}

Termination classify_termination(std::span<const double> trace, int patience) {
  if (trace.empty()) return Termination::stopped_by_criterion;
  if (!std::isfinite(trace.back())) return Termination::diverged;
  const std::size_t w = trace.size();
  const std::size_t m = static_cast<std::size_t>(patience);
  if (w < m + 2) return Termination::stopped_by_criterion;  // no baseline to judge against

  // Baseline spread of window-to-window changes, excluding the final
  // `patience` changes under judgment.
  const std::size_t n_diffs = w - 1;
  const std::size_t n_base = n_diffs - m;
  double mean = 0.0;
  for (std::size_t i = 0; i < n_base; ++i) mean += trace[i + 1] - trace[i];
  mean /= static_cast<double>(n_base);
  double var = 0.0;
  for (std::size_t i = 0; i < n_base; ++i) {
    const double d = (trace[i + 1] - trace[i]) - mean;
    var += d * d;
  }
  const double sd = n_base > 1 ? std::sqrt(var / static_cast<double>(n_base - 1)) : 0.0;
  double lbar_max = -kInf;
  for (double v : trace) lbar_max = std::max(lbar_max, v);
  const double floor = 1e-9 * std::max(1.0, std::abs(lbar_max));
  const double threshold = -10.0 * std::max(sd, floor);

  for (std::size_t i = n_base; i < n_diffs; ++i) {
    const double diff = trace[i + 1] - trace[i];
    if (!(diff < threshold)) return Termination::stopped_by_criterion;
  }
  return Termination::diverged;
}

FitResult run_fit(const TargetModel& model, const FitConfig& config) {
  config.validate();
  const index_t d = model.dim();

  PatternPtr pattern;
  switch (config.algorithm) {
    case Algorithm::alg2_sparse: pattern = share(model.recommended_pattern()); break;
    case Algorithm::alg1_unrestricted: pattern = share(dense_lower_pattern(d)); break;
    case Algorithm::alg1_meanfield: pattern = share(diagonal_pattern(d)); break;
  }
  if (pattern->dim() != d) throw std::invalid_argument("run_fit: pattern dim != model dim");
  const bool precision = config.algorithm == Algorithm::alg2_sparse;

  VariationalState state =
      VariationalState::initial(pattern, config.adadelta_rho, config.adadelta_eps);
  Rng rng(config.rng_seed);
  StoppingRule rule(config.patience);

  const std::size_t nnz = static_cast<std::size_t>(pattern->nnz());
  const SparsityPattern& pat = *pattern;
  GradientEstimate est;
  EstimatorWorkspace ws;
  DenseVector s(static_cast<std::size_t>(d));
  DenseVector g_mu_acc, g_factor_acc;
  DenseVector delta_mu(static_cast<std::size_t>(d)), delta_factor(nnz);
  const bool multi_draw = config.draws_per_iter > 1;
  if (multi_draw) {
    g_mu_acc.resize(static_cast<std::size_t>(d));
    g_factor_acc.resize(nnz);
  }

  std::vector<double> trace;
  Termination termination = Termination::max_iterations;
  std::int64_t iterations = 0;
  std::int64_t consecutive_bad = 0;
  double window_sum = 0.0;
  bool window_bad = false;
  bool done = false;

  // log|T| = sum of tprime's diagonal entries; maintained incrementally.
  auto factor_log_det = [&]() {
    double acc = 0.0;
    for (index_t j = 0; j < d; ++j)
      acc += state.tprime[static_cast<std::size_t>(pat.diag_pos(j))];
    return acc;
  };

  for (std::int64_t t = 1; t <= config.max_iterations && !done; ++t) {
    double lhat = 0.0;
    bool finite = true;
    const double log_det_now = factor_log_det();
    if (!multi_draw) {
      rng.normal_vec(s);
      if (precision) {
        estimate_gradients(state.mu, state.factor, model, s, config.estimator, est, ws);
      } else {
        estimate_gradients_covariance(state.mu, state.factor, model, s, config.estimator, est,
                                      ws);
      }
      finite = est.finite;
      lhat = lower_bound_from_parts(est.log_h, d, log_det_now, precision, kernels::sum_sq(s));
    } else {
      std::fill(g_mu_acc.begin(), g_mu_acc.end(), 0.0);
      std::fill(g_factor_acc.begin(), g_factor_acc.end(), 0.0);
      for (int k = 0; k < config.draws_per_iter; ++k) {
        rng.normal_vec(s);
        if (precision) {
          estimate_gradients(state.mu, state.factor, model, s, config.estimator, est, ws);
        } else {
          estimate_gradients_covariance(state.mu, state.factor, model, s, config.estimator, est,
                                        ws);
        }
        finite = finite && est.finite;
        lhat += lower_bound_from_parts(est.log_h, d, log_det_now, precision,
                                       kernels::sum_sq(s));
        kernels::axpy(1.0, est.g_mu, g_mu_acc);
        kernels::axpy(1.0, est.g_factor, g_factor_acc);
      }
      const double inv = 1.0 / config.draws_per_iter;
      for (double& v : g_mu_acc) v *= inv;
      for (double& v : g_factor_acc) v *= inv;
      lhat *= inv;
    }

    if (finite) {
      consecutive_bad = 0;
      std::span<double> g_mu = multi_draw ? std::span<double>(g_mu_acc) : std::span<double>(est.g_mu);
      std::span<double> g_factor =
          multi_draw ? std::span<double>(g_factor_acc) : std::span<double>(est.g_factor);
      chain_to_tprime(state.factor, g_factor);
      state.mu_acc.step(g_mu, delta_mu);
      state.factor_acc.step(g_factor, delta_factor);
      kernels::axpy(1.0, delta_mu, state.mu);
      state.apply_factor_delta(delta_factor);
      window_sum += lhat;
      if (!std::isfinite(lhat)) window_bad = true;
      // A wildly overshooting tprime can push exp() outside the representable
      // range; that is divergence, not a crash.
      for (index_t j = 0; j < d; ++j) {
        const double diag = state.factor.diag(j);
        if (!std::isfinite(diag) || diag < kDiagFloor) {
          termination = Termination::diverged;
          done = true;
          break;
        }
      }
    } else {
      ++consecutive_bad;
      window_bad = true;
    }
    iterations = t;

    if (t % config.window == 0) {
      const double lbar = window_bad ? -kInf : window_sum / static_cast<double>(config.window);
      trace.push_back(lbar);
      window_sum = 0.0;
      window_bad = false;
      if (!done) {
        if (consecutive_bad >= config.window) {
          termination = Termination::diverged;
          done = true;
        } else if (rule.observe(lbar)) {
          termination = classify_termination(trace, config.patience);
          done = true;
        }
      }
    }
    if (done) break;
  }

  return FitResult{std::move(state.mu),
                   std::move(state.factor),
                   precision,
                   std::move(trace),
                   termination,
                   iterations,
                   config.rng_seed,
                   config.algorithm,
                   config.estimator,
                   config.window,
                   config.patience};
}

}  // namespace gva
