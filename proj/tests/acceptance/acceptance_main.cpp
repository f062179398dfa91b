// Acceptance suite: each numbered check prints one PASS/FAIL line; the
// process exits nonzero if any check fails. Tolerances are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gva/cli.hpp"
#include "gva/datasets.hpp"
#include "gva/estimators.hpp"
#include "gva/fit.hpp"
#include "gva/gradcheck.hpp"
#include "gva/kernels.hpp"
#include "gva/result_io.hpp"
#include "gva/rng.hpp"
#include "gva/synth.hpp"
#include "support/oracles.hpp"

using namespace gva;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  criterion %2d  %-28s %s\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double max_abs_diff(const DenseVector& a, const DenseVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double rel_frobenius(const CholeskyFactor& fitted, const CholeskyFactor& target) {
  const Eigen::MatrixXd t = oracles::to_dense(fitted);
  const Eigen::MatrixXd ts = oracles::to_dense(target);
  return ((t * t.transpose()) - (ts * ts.transpose())).norm() /
         (ts * ts.transpose()).norm();
}

// --------------------------------------------------------------------------
// 1. gradient oracle

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string worst_model = "-";

  auto run = [&](const TargetModel& model, const std::string& name) {
    const auto report_ = gradcheck(model, whole_vector_block(model.dim()), 20, 1e-5, 1001);
    if (report_.max_rel_error > worst) {
      worst = report_.max_rel_error;
      worst_model = name;
    }
  };

  {
    const auto table = load_csv(oracles::data_path("epilepsy.csv"),
                                {"id", "visit", "y", "base", "trt", "age"});
    run(GlmmModel(build_epilepsy_model(table, EpilepsyVariant::model1)), "epilepsy1");
    run(GlmmModel(build_epilepsy_model(table, EpilepsyVariant::model2)), "epilepsy2");
  }
  {
    const auto table = load_csv(oracles::data_path("toenail.csv"),
                                {"id", "visit", "month", "trt", "severity"});
    run(GlmmModel(build_toenail_model(table)), "toenail");
  }
  run(SvModel(load_sv_spec(oracles::data_path("gbpusd.csv"))), "sv");

  const double secs = elapsed_s(t0);
  report(1, "gradient oracle", worst < 1e-4 && secs < 10.0,
         fmt("max rel err %.2e (worst: %s), %.1f s", worst, worst_model.c_str(), secs));
}

// --------------------------------------------------------------------------
// 2. unbiasedness on a d=20 gaussian target with the ssm pattern

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = make_gaussian_target(GaussianTargetKind::band, 20, 1002);
  GaussianTargetModel model(spec);
  const CholeskyFactor T = CholeskyFactor::identity(spec.factor.pattern_ptr());
  const DenseVector mu(20, 0.0);

  const Eigen::MatrixXd t_star = oracles::to_dense(spec.factor);
  const Eigen::VectorXd expected = t_star * t_star.transpose() * oracles::to_eigen(spec.mean);

  const std::int64_t draws = 100000;
  bool ok = true;
  double worst_z = 0.0;
  for (Estimator family : {Estimator::family1, Estimator::family2}) {
    Rng rng(1003);
    DenseVector s(20), mean(20, 0.0), m2(20, 0.0);
    GradientEstimate est;
    EstimatorWorkspace ws;
    for (std::int64_t i = 0; i < draws; ++i) {
      rng.normal_vec(s);
      estimate_gradients(mu, T, model, s, family, est, ws);
      for (int c = 0; c < 20; ++c) {
        const double delta = est.g_mu[c] - mean[c];
        mean[c] += delta / static_cast<double>(i + 1);
        m2[c] += delta * (est.g_mu[c] - mean[c]);
      }
    }
    for (int c = 0; c < 20; ++c) {
      const double se = std::sqrt(m2[c] / static_cast<double>(draws - 1) /
                                  static_cast<double>(draws));
      const double z = std::abs(mean[c] - expected(c)) / std::max(se, 1e-300);
      worst_z = std::max(worst_z, z);
      ok = ok && z < 3.0;
    }
  }
  const double secs = elapsed_s(t0);
  report(2, "estimator unbiasedness", ok && secs < 30.0,
         fmt("1e5 draws, worst |z| = %.2f, %.1f s", worst_z, secs));
}

// --------------------------------------------------------------------------
// 3. exact recovery of gaussian targets

void criterion3() {
  struct Case {
    GaussianTargetKind kind;
    index_t dim;
  };
  const std::vector<Case> cases = {{GaussianTargetKind::band, 20},
                                   {GaussianTargetKind::blockarrow, 20},
                                   {GaussianTargetKind::band, 200},
                                   {GaussianTargetKind::blockarrow, 200}};
  bool all_ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = make_gaussian_target(c.kind, c.dim, 1004);
    GaussianTargetModel model(spec);
    FitConfig config;
    config.algorithm = Algorithm::alg2_sparse;
    config.estimator = Estimator::family2;
    config.max_iterations = 200000;
    config.rng_seed = 1005;
    const FitResult result = run_fit(model, config);
    const double mu_err = max_abs_diff(result.mu, spec.mean);
    const double omega_err = rel_frobenius(result.factor, spec.factor);
    const double secs = elapsed_s(t0);
    const bool ok = mu_err < 0.05 && omega_err < 0.05 && secs < 120.0;
    all_ok = all_ok && ok;
    detail += fmt("%s/d=%d: mu %.3f omega %.3f %.0fs; ", to_string(c.kind), c.dim, mu_err,
                  omega_err, secs);
  }
  report(3, "gaussian recovery", all_ok, detail);
}

// --------------------------------------------------------------------------
// 4. figure-1 variance property

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const int draws = 1000;

  // (a) at the mode of the identity gaussian target: family-2 variance is 0
  bool gauss_ok = true;
  {
    const auto spec = make_gaussian_target(GaussianTargetKind::identity, 20, 1006);
    GaussianTargetModel model(spec);
    Rng rng(1007);
    DenseVector s(20);
    GradientEstimate est;
    EstimatorWorkspace ws;
    for (int i = 0; i < draws && gauss_ok; ++i) {
      rng.normal_vec(s);
      estimate_gradients(spec.mean, spec.factor, model, s, Estimator::family2, est, ws);
      for (double g : est.g_mu) gauss_ok = gauss_ok && g == 0.0;
    }
  }

  // (b) synthetic logistic glmm (n=50): per-component variance ratio < 1 at
  // the fitted mode
  double worst_ratio = 0.0;
  {
    GlmmModel model(make_logistic_glmm(50, 6, 4, 1008));
    FitConfig config;
    config.algorithm = Algorithm::alg2_sparse;
    config.estimator = Estimator::family2;
    config.max_iterations = 60000;
    config.rng_seed = 1009;
    const FitResult fit = run_fit(model, config);

    const index_t d = model.dim();
    std::vector<DenseVector> g1(d), g2(d);
    Rng rng(1010);
    DenseVector s(static_cast<std::size_t>(d));
    GradientEstimate est;
    EstimatorWorkspace ws;
    for (int i = 0; i < draws; ++i) {
      rng.normal_vec(s);
      estimate_gradients(fit.mu, fit.factor, model, s, Estimator::family1, est, ws);
      for (index_t c = 0; c < d; ++c) g1[c].push_back(est.g_mu[c]);
      estimate_gradients(fit.mu, fit.factor, model, s, Estimator::family2, est, ws);
      for (index_t c = 0; c < d; ++c) g2[c].push_back(est.g_mu[c]);
    }
    for (index_t c = 0; c < d; ++c) {
      const double ratio = oracles::variance_of(g2[c]) / oracles::variance_of(g1[c]);
      worst_ratio = std::max(worst_ratio, ratio);
    }
  }
  // (c) the same protocol at the fitted mode of the toenail data, global
  // parameter block
  double toenail_worst = 0.0;
  {
    const auto table = load_csv(oracles::data_path("toenail.csv"),
                                {"id", "visit", "month", "trt", "severity"});
    GlmmModel model(build_toenail_model(table));
    FitConfig config;
    config.algorithm = Algorithm::alg2_sparse;
    config.estimator = Estimator::family2;
    config.max_iterations = 100000;
    config.rng_seed = 1020;
    const FitResult fit = run_fit(model, config);

    const index_t d = model.dim();
    Rng rng(1021);
    DenseVector s(static_cast<std::size_t>(d));
    GradientEstimate est;
    EstimatorWorkspace ws;
    std::vector<DenseVector> g1(5), g2(5);
    for (int i = 0; i < draws; ++i) {
      rng.normal_vec(s);
      estimate_gradients(fit.mu, fit.factor, model, s, Estimator::family1, est, ws);
      for (int c = 0; c < 5; ++c) g1[c].push_back(est.g_mu[d - 5 + c]);
      estimate_gradients(fit.mu, fit.factor, model, s, Estimator::family2, est, ws);
      for (int c = 0; c < 5; ++c) g2[c].push_back(est.g_mu[d - 5 + c]);
    }
    for (int c = 0; c < 5; ++c) {
      toenail_worst =
          std::max(toenail_worst, oracles::variance_of(g2[c]) / oracles::variance_of(g1[c]));
    }
  }

  const double secs = elapsed_s(t0);
  report(4, "figure-1 variance property",
         gauss_ok && worst_ratio < 1.0 && toenail_worst < 1.0 && secs < 60.0,
         fmt("gaussian var2 exactly 0: %s; glmm worst var2/var1 = %.3f; toenail global-block "
             "worst = %.3f; %.1f s",
             gauss_ok ? "yes" : "no", worst_ratio, toenail_worst, secs));
}

// --------------------------------------------------------------------------
// 5. family nesting on epilepsy model I

void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = load_csv(oracles::data_path("epilepsy.csv"),
                              {"id", "visit", "y", "base", "trt", "age"});
  GlmmModel model(build_epilepsy_model(table, EpilepsyVariant::model1));

  FitConfig config;
  config.estimator = Estimator::family2;
  config.max_iterations = 150000;
  config.rng_seed = 1011;

  config.algorithm = Algorithm::alg2_sparse;
  const auto t_alg2 = std::chrono::steady_clock::now();
  const FitResult sparse_fit = run_fit(model, config);
  const double alg2_secs = elapsed_s(t_alg2);

  config.algorithm = Algorithm::alg1_meanfield;
  const auto t_alg1 = std::chrono::steady_clock::now();
  const FitResult mf_fit = run_fit(model, config);
  const double alg1_secs = elapsed_s(t_alg1);

  const auto lb2 = mc_lower_bound(sparse_fit.mu, sparse_fit.factor, true, model, 10000, 1012);
  const auto lb1 = mc_lower_bound(mf_fit.mu, mf_fit.factor, false, model, 10000, 1013);
  const double se = std::sqrt(lb1.std_error * lb1.std_error + lb2.std_error * lb2.std_error);
  const bool ok = lb2.mean >= lb1.mean - 2.0 * se;
  const double secs = elapsed_s(t0);
  report(5, "family nesting (epilepsy I)", ok,
         fmt("alg2 %.3f +- %.3f vs alg1-mf %.3f +- %.3f; runtimes %.1f / %.1f s "
             "(paper desk targets 20 / 7 s); total %.1f s",
             lb2.mean, lb2.std_error, lb1.mean, lb1.std_error, alg2_secs, alg1_secs, secs));
}

// --------------------------------------------------------------------------
// 6. complexity scaling

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<index_t> sizes = {500, 1000, 2000};
  const std::int64_t iters = 400;
  std::vector<double> per_iter_s;
  std::vector<nnz_t> touched_per_iter;

  for (const index_t n : sizes) {
    SvModel model(make_sv_series(n, 1014));
    FitConfig config;
    config.algorithm = Algorithm::alg2_sparse;
    config.max_iterations = iters;
    config.window = iters;
    config.rng_seed = 1015;
    reset_touched_nonzeros();
    const auto ts = std::chrono::steady_clock::now();
    (void)run_fit(model, config);
    per_iter_s.push_back(elapsed_s(ts) / static_cast<double>(iters));
    touched_per_iter.push_back(touched_nonzeros() / iters);
  }

  const double ratio = per_iter_s[2] / per_iter_s[1];
  // touched counts per iteration are affine in n: equal second differences
  const nnz_t second_diff =
      (touched_per_iter[2] - touched_per_iter[1]) - 2 * (touched_per_iter[1] - touched_per_iter[0]);
  const bool linear = second_diff == 0;

  // cost comparison against algorithm 1 at n = 1000
  double full_per_iter = 0.0, mf_per_iter = 0.0;
  {
    SvModel model(make_sv_series(1000, 1014));
    for (const Algorithm algorithm : {Algorithm::alg1_unrestricted, Algorithm::alg1_meanfield}) {
      FitConfig config;
      config.algorithm = algorithm;
      config.max_iterations = iters;
      config.window = iters;
      config.rng_seed = 1015;
      const auto ts = std::chrono::steady_clock::now();
      (void)run_fit(model, config);
      const double per_iter = elapsed_s(ts) / static_cast<double>(iters);
      (algorithm == Algorithm::alg1_unrestricted ? full_per_iter : mf_per_iter) = per_iter;
    }
  }
  const double full_ratio = full_per_iter / per_iter_s[1];
  const double mf_ratio = per_iter_s[1] / mf_per_iter;

  const double secs = elapsed_s(t0);
  report(6, "complexity scaling",
         ratio < 2.5 && linear && full_ratio >= 5.0 && mf_ratio < 4.0 && secs < 120.0,
         fmt("t(2000)/t(1000) = %.2f; touched/iter = %lld/%lld/%lld (affine: %s); "
             "alg1-full/alg2 = %.0fx, alg2/alg1-mf = %.1fx; %.1f s",
             ratio, static_cast<long long>(touched_per_iter[0]),
             static_cast<long long>(touched_per_iter[1]),
             static_cast<long long>(touched_per_iter[2]), linear ? "yes" : "no", full_ratio,
             mf_ratio, secs));
}

// --------------------------------------------------------------------------
// 7. stopping rule unit suite

void criterion7() {
  bool ok = true;
  ok = ok && stopping_fires_at(std::vector<double>{1, 2, 3, 2.9, 2.8, 2.7}, 3) == 6;
  ok = ok && stopping_fires_at(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 3) == -1;
  ok = ok && stopping_fires_at(std::vector<double>{1, 2, 1.9, 2.1, 1.8, 1.7, 1.6}, 3) == 7;
  ok = ok && stopping_fires_at(std::vector<double>{5, 4, 4.5, 4.4, 4.3}, 3) == 4;
  // defaults F=2500, M=3 are wired into FitConfig
  const FitConfig defaults;
  ok = ok && defaults.window == 2500 && defaults.patience == 3;
  report(7, "stopping rule", ok, "max-tracking, counter reset, M-consecutive termination");
}

// --------------------------------------------------------------------------
// 8. adadelta arithmetic

void criterion8() {
  AdadeltaAccumulator acc(1, 0.95, 1e-6);
  const DenseVector delta = acc.step(DenseVector{1.0});
  const double expected = std::sqrt(1e-6) / std::sqrt(0.95 * 0.0 + (1.0 - 0.95) * 1.0 + 1e-6);
  const bool exact_ok = std::abs(delta[0] - expected) < 1e-18;
  const bool printed_ok = std::abs(delta[0] - 4.4718e-3) / 4.4718e-3 < 1e-3;

  AdadeltaAccumulator zero_acc(1, 0.95, 1e-6);
  zero_acc.eg2 = {0.3};
  zero_acc.edx2 = {0.2};
  const DenseVector zero_delta = zero_acc.step(DenseVector{0.0});
  const bool zero_ok = zero_delta[0] == 0.0 && zero_acc.eg2[0] == 0.95 * 0.3;

  bool sign_ok = true;
  AdadeltaAccumulator sign_acc(2, 0.95, 1e-6);
  Rng rng(1016);
  for (int i = 0; i < 200; ++i) {
    const DenseVector g = {rng.normal(), rng.normal()};
    const DenseVector d = sign_acc.step(g);
    for (int c = 0; c < 2; ++c) {
      sign_ok = sign_ok && (g[c] == 0.0 || std::signbit(d[c]) == std::signbit(g[c]));
    }
  }
  report(8, "adadelta arithmetic", exact_ok && printed_ok && zero_ok && sign_ok,
         fmt("first step %.6e (expected 4.4721e-3, printed 4.4718e-3)", delta[0]));
}

// --------------------------------------------------------------------------
// 9. determinism via the cli and manifest replay

void criterion9() {
  const std::string base = "/tmp/gva_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  auto run_cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "gva");
    return cli_run(args);
  };
  const std::string out1 = base + "/fit1";
  const std::string out2 = base + "/fit2";
  int code = run_cli({"fit", "--model", "gaussian-test", "--gt-dim", "20", "--seed", "11",
                      "--max-iter", "25000", "--out", out1});
  bool ok = code == 0;
  ok = ok && run_cli({"replay", "--manifest", out1 + "/manifest.txt", "--out", out2}) == 0;
  std::string detail = "replayed manifest, checksums";
  for (const char* f : {"result.txt", "summary.csv", "trace.csv", "manifest.txt"}) {
    const std::string c1 = file_checksum(out1 + "/" + f);
    const std::string c2 = file_checksum(out2 + "/" + f);
    ok = ok && c1 == c2;
  }
  report(9, "determinism", ok, detail + (ok ? " identical" : " MISMATCH"));
}

// --------------------------------------------------------------------------
// 10. end-to-end dataset smoke

void criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;

  {
    const auto table = load_csv(oracles::data_path("toenail.csv"),
                                {"id", "visit", "month", "trt", "severity"});
    GlmmModel model(build_toenail_model(table));
    FitConfig config;
    config.algorithm = Algorithm::alg2_sparse;
    config.estimator = Estimator::family2;
    config.max_iterations = 300000;
    config.rng_seed = 1017;
    const FitResult fit = run_fit(model, config);
    ok = ok && fit.termination == Termination::stopped_by_criterion;
    detail += fmt("toenail: %s @%lld; ", to_string(fit.termination),
                  static_cast<long long>(fit.iterations_used));
  }

  {
    SvModel model(load_sv_spec(oracles::data_path("gbpusd.csv")));
    FitConfig config;
    config.algorithm = Algorithm::alg2_sparse;
    config.estimator = Estimator::family2;
    config.max_iterations = 300000;
    config.rng_seed = 1018;
    const FitResult fit = run_fit(model, config);
    ok = ok && fit.termination == Termination::stopped_by_criterion;
    detail += fmt("gbpusd: %s @%lld; ", to_string(fit.termination),
                  static_cast<long long>(fit.iterations_used));

    const DenseVector var = marginal_variances(fit.factor);
    DenseVector sd(var.size());
    for (std::size_t i = 0; i < var.size(); ++i) sd[i] = std::sqrt(var[i]);
    const std::string band = "/tmp/gva_acceptance/volatility_band.csv";
    fs::create_directories("/tmp/gva_acceptance");
    write_volatility_band_csv(band, fit.mu, sd, 945);
    std::ifstream in(band);
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    ok = ok && lines == 946;  // header + 945 rows
    detail += fmt("band rows %zu; ", lines - 1);
  }

  {
    // informational: algorithm 1 unrestricted on GBP/USD may diverge, as in
    // the source study; a capped run records its status without asserting.
    SvModel model(load_sv_spec(oracles::data_path("gbpusd.csv")));
    FitConfig config;
    config.algorithm = Algorithm::alg1_unrestricted;
    config.estimator = Estimator::family2;
    config.max_iterations = 25000;
    config.rng_seed = 1019;
    const FitResult fit = run_fit(model, config);
    detail += fmt("alg1-full gbpusd (capped): %s", to_string(fit.termination));
  }

  const double secs = elapsed_s(t0);
  report(10, "dataset smoke", ok, detail + fmt("; %.1f s", secs));
}

}  // namespace

int main() {
  std::printf("acceptance suite (kernels: %s)\n", kernels::isa_name(kernels::active_isa()));
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
