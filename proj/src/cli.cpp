#include "gva/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "gva/datasets.hpp"
#include "gva/errors.hpp"
#include "gva/estimators.hpp"
#include "gva/fit.hpp"
#include "gva/gaussian_target.hpp"
#include "gva/gradcheck.hpp"
#include "gva/result_io.hpp"
#include "gva/rng.hpp"
#include "gva/synth.hpp"

namespace gva {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitGradcheck = 3;

struct GaussianTestOptions {
  std::string kind = "band";
  index_t dim = 20;
  std::uint64_t seed = 20160908;
};

struct BuiltModel {
  std::unique_ptr<TargetModel> model;
  std::vector<GradCheckBlock> blocks;
  std::vector<index_t> default_components;  // 0-based, for varcompare
  index_t sv_states = 0;                    // > 0 for SV models
  const GaussianTargetSpec* gaussian_spec = nullptr;
};

std::vector<index_t> range_block(index_t begin, index_t end) {
  std::vector<index_t> out;
  for (index_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

BuiltModel build_model(const std::string& tag, const std::string& data,
                       const GaussianTestOptions& gt) {
  BuiltModel built;
  if (tag == "epilepsy1" || tag == "epilepsy2") {
    const auto table = load_csv(data, {"id", "visit", "y", "base", "trt", "age"});
    auto spec = build_epilepsy_model(
        table, tag == "epilepsy1" ? EpilepsyVariant::model1 : EpilepsyVariant::model2);
    const index_t nb = spec.n_subjects * spec.p, kb = spec.k_beta, q = spec.zeta_len();
    built.blocks = {{"b", 0, nb}, {"beta", nb, nb + kb}, {"zeta", nb + kb, nb + kb + q}};
    built.default_components = range_block(nb, nb + kb + q);
    built.model = std::make_unique<GlmmModel>(std::move(spec));
  } else if (tag == "toenail") {
    const auto table = load_csv(data, {"id", "visit", "month", "trt", "severity"});
    auto spec = build_toenail_model(table);
    const index_t nb = spec.n_subjects * spec.p, kb = spec.k_beta, q = spec.zeta_len();
    built.blocks = {{"b", 0, nb}, {"beta", nb, nb + kb}, {"zeta", nb + kb, nb + kb + q}};
    built.default_components = range_block(nb, nb + kb + q);
    built.model = std::make_unique<GlmmModel>(std::move(spec));
  } else if (tag == "polypharmacy") {
    const auto table = load_csv(data, {"id", "year", "y", "gender", "race", "age", "mhv", "inptmhv"});
    auto spec = build_polypharmacy_model(table);
    const index_t nb = spec.n_subjects * spec.p, kb = spec.k_beta, q = spec.zeta_len();
    built.blocks = {{"b", 0, nb}, {"beta", nb, nb + kb}, {"zeta", nb + kb, nb + kb + q}};
    built.default_components = range_block(nb, nb + kb + q);
    built.model = std::make_unique<GlmmModel>(std::move(spec));
  } else if (tag == "sv") {
    auto spec = load_sv_spec(data);
    const index_t n = spec.n();
    built.blocks = {{"b", 0, n}, {"alpha", n, n + 1}, {"lambda", n + 1, n + 2}, {"psi", n + 2, n + 3}};
    built.default_components = range_block(n, n + 3);
    built.sv_states = n;
    built.model = std::make_unique<SvModel>(std::move(spec));
  } else if (tag == "gaussian-test") {
    GaussianTargetKind kind;
    if (!gaussian_target_kind_from_string(gt.kind, kind))
      throw CLI::ValidationError("--gt-kind", "unknown Gaussian target kind '" + gt.kind + "'");
    auto spec = make_gaussian_target(kind, gt.dim, gt.seed);
    built.blocks = whole_vector_block(gt.dim);
    built.default_components =
        gt.dim <= 24 ? range_block(0, gt.dim) : range_block(0, 8);
    auto model = std::make_unique<GaussianTargetModel>(std::move(spec));
    built.gaussian_spec = &model->spec();
    built.model = std::move(model);
  } else {
    throw CLI::ValidationError("--model", "unknown model '" + tag + "'");
  }
  return built;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("GVA_OUT_DIR")) return env;
  return ".";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + dir + "'");
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

DenseVector posterior_sds(const FitResult& result) {
  const DenseVector var = result.precision ? marginal_variances(result.factor)
                                           : marginal_variances_covariance(result.factor);
  DenseVector sd(var.size());
  for (std::size_t i = 0; i < var.size(); ++i) sd[i] = std::sqrt(var[i]);
  return sd;
}

void add_artifacts(RunManifest& manifest, const std::string& dir,
                   const std::vector<std::string>& files, bool checksum = true) {
  for (const auto& f : files) {
    manifest.artifacts.emplace_back(f, checksum ? file_checksum(join_path(dir, f)) : "-");
  }
}

std::vector<index_t> parse_components(const std::string& arg, index_t dim,
                                      const std::vector<index_t>& fallback) {
  if (arg.empty()) return fallback;
  if (arg == "all") return range_block(0, dim);
  std::vector<index_t> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long v = std::strtol(item.c_str(), nullptr, 10);
    if (v < 1 || v > dim) throw DataError("--components: index " + item + " out of range");
    out.push_back(static_cast<index_t>(v - 1));
  }
  if (out.empty()) throw DataError("--components: empty list");
  return out;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string model, data, algorithm = "alg2", out;
  int estimator = 2;
  std::uint64_t seed = 1;
  std::int64_t max_iter = 100000;
  std::int64_t window = 2500;
  int patience = 3;
  int draws_per_iter = 1;
  GaussianTestOptions gt;
};

int run_fit_command(const FitArgs& args) {
  const BuiltModel built = build_model(args.model, args.data, args.gt);

  FitConfig config;
  if (!algorithm_from_string(args.algorithm, config.algorithm))
    throw CLI::ValidationError("--algorithm", "unknown algorithm '" + args.algorithm + "'");
  config.estimator = args.estimator == 1 ? Estimator::family1 : Estimator::family2;
  config.rng_seed = args.seed;
  config.max_iterations = args.max_iter;
  config.window = args.window;
  config.patience = args.patience;
  config.draws_per_iter = args.draws_per_iter;
  config.validate();

  const auto start = std::chrono::steady_clock::now();
  const FitResult result = run_fit(*built.model, config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ensure_dir(args.out);
  write_fit_result(join_path(args.out, "result.txt"), result);
  const DenseVector sd = posterior_sds(result);
  write_summary_csv(join_path(args.out, "summary.csv"), result.mu, sd);
  write_trace_csv(join_path(args.out, "trace.csv"), result.lbar_trace, result.window);
  std::vector<std::string> files = {"result.txt", "summary.csv", "trace.csv"};
  if (built.sv_states > 0) {
    write_volatility_band_csv(join_path(args.out, "volatility_band.csv"), result.mu, sd,
                              built.sv_states);
    files.push_back("volatility_band.csv");
  }

  RunManifest manifest;
  manifest.subcommand = "fit";
  manifest.options = {{"model", args.model},
                      {"data", args.data.empty() ? "-" : args.data},
                      {"algorithm", args.algorithm},
                      {"estimator", std::to_string(args.estimator)},
                      {"seed", std::to_string(args.seed)},
                      {"max-iter", std::to_string(args.max_iter)},
                      {"window", std::to_string(args.window)},
                      {"patience", std::to_string(args.patience)},
                      {"draws-per-iter", std::to_string(args.draws_per_iter)}};
  if (args.model == "gaussian-test") {
    manifest.options.emplace_back("gt-kind", args.gt.kind);
    manifest.options.emplace_back("gt-dim", std::to_string(args.gt.dim));
    manifest.options.emplace_back("gt-seed", std::to_string(args.gt.seed));
  }
  add_artifacts(manifest, args.out, files);
  write_manifest(join_path(args.out, "manifest.txt"), manifest);

  std::cout << "fit " << args.model << " " << to_string(result.algorithm) << " estimator "
            << args.estimator << ": " << to_string(result.termination) << " after "
            << result.iterations_used << " iterations (" << format_double(seconds)
            << " s), outputs in " << args.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gradcheck

struct GradcheckArgs {
  std::string model, data, out;
  int points = 20;
  double step = 1e-5;
  std::uint64_t seed = 7;
  GaussianTestOptions gt;
};

int run_gradcheck_command(const GradcheckArgs& args) {
  const BuiltModel built = build_model(args.model, args.data, args.gt);
  const GradCheckReport report = gradcheck(*built.model, built.blocks, args.points, args.step, args.seed);
  constexpr double kTol = 1e-4;

  ensure_dir(args.out);
  {
    std::ofstream out(join_path(args.out, "gradcheck.csv"), std::ios::binary);
    out << "block,max_rel_error,worst_component\n";
    for (const auto& b : report.blocks) {
      out << b.name << ',' << format_double(b.max_rel_error) << ',' << (b.worst_component + 1)
          << '\n';
    }
  }
  RunManifest manifest;
  manifest.subcommand = "gradcheck";
  manifest.options = {{"model", args.model},
                      {"data", args.data.empty() ? "-" : args.data},
                      {"points", std::to_string(args.points)},
                      {"step", format_double(args.step)},
                      {"seed", std::to_string(args.seed)}};
  if (args.model == "gaussian-test") {
    manifest.options.emplace_back("gt-kind", args.gt.kind);
    manifest.options.emplace_back("gt-dim", std::to_string(args.gt.dim));
    manifest.options.emplace_back("gt-seed", std::to_string(args.gt.seed));
  }
  add_artifacts(manifest, args.out, {"gradcheck.csv"});
  write_manifest(join_path(args.out, "manifest.txt"), manifest);

  for (const auto& b : report.blocks) {
    std::printf("%-8s max rel error %.3e at component %d\n", b.name.c_str(), b.max_rel_error,
                b.worst_component + 1);
  }
  if (!report.passes(kTol)) {
    std::cout << "gradcheck FAILED: max rel error " << format_double(report.max_rel_error)
              << " exceeds " << format_double(kTol) << "\n";
    return kExitGradcheck;
  }
  std::cout << "gradcheck passed: max rel error " << format_double(report.max_rel_error) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// varcompare

struct VarcompareArgs {
  std::string model, data, result, components, out;
  int draws = 1000;
  bool at_optimum = false;
  std::uint64_t seed = 99;
  GaussianTestOptions gt;
};

int run_varcompare_command(const VarcompareArgs& args) {
  const BuiltModel built = build_model(args.model, args.data, args.gt);
  const index_t d = built.model->dim();

  DenseVector mu;
  std::unique_ptr<CholeskyFactor> factor;
  bool precision = true;
  if (args.at_optimum) {
    if (!built.gaussian_spec)
      throw DataError("--at-optimum is only available for --model gaussian-test");
    mu = built.gaussian_spec->mean;
    factor = std::make_unique<CholeskyFactor>(built.gaussian_spec->factor);
  } else {
    if (args.result.empty()) throw DataError("varcompare needs --result (or --at-optimum)");
    FitResult result = load_fit_result(args.result);
    if (result.factor.dim() != d) throw DataError("--result dimension does not match model");
    mu = std::move(result.mu);
    factor = std::make_unique<CholeskyFactor>(std::move(result.factor));
    precision = result.precision;
  }

  const std::vector<index_t> components =
      parse_components(args.components, d, built.default_components);

  Rng rng(args.seed);
  DenseVector s(static_cast<std::size_t>(d));
  std::vector<DenseVector> g1(components.size()), g2(components.size());
  for (auto& v : g1) v.reserve(args.draws);
  for (auto& v : g2) v.reserve(args.draws);
  GradientEstimate est;
  EstimatorWorkspace ws;
  for (int draw = 0; draw < args.draws; ++draw) {
    rng.normal_vec(s);
    for (int family = 1; family <= 2; ++family) {
      const Estimator e = family == 1 ? Estimator::family1 : Estimator::family2;
      if (precision) {
        estimate_gradients(mu, *factor, *built.model, s, e, est, ws);
      } else {
        estimate_gradients_covariance(mu, *factor, *built.model, s, e, est, ws);
      }
      for (std::size_t c = 0; c < components.size(); ++c) {
        (family == 1 ? g1[c] : g2[c]).push_back(est.g_mu[components[c]]);
      }
    }
  }

  auto variance = [](const DenseVector& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return v.size() > 1 ? acc / static_cast<double>(v.size() - 1) : 0.0;
  };

  ensure_dir(args.out);
  {
    std::ofstream out(join_path(args.out, "draws.csv"), std::ios::binary);
    out << "component,draw,g1,g2\n";
    for (std::size_t c = 0; c < components.size(); ++c) {
      for (int draw = 0; draw < args.draws; ++draw) {
        out << (components[c] + 1) << ',' << (draw + 1) << ',' << format_double(g1[c][draw])
            << ',' << format_double(g2[c][draw]) << '\n';
      }
    }
  }
  {
    std::ofstream out(join_path(args.out, "ratios.csv"), std::ios::binary);
    out << "component,var1,var2,ratio\n";
    for (std::size_t c = 0; c < components.size(); ++c) {
      const double v1 = variance(g1[c]);
      const double v2 = variance(g2[c]);
      const double ratio = v2 == 0.0 ? 0.0 : v2 / v1;
      out << (components[c] + 1) << ',' << format_double(v1) << ',' << format_double(v2) << ','
          << format_double(ratio) << '\n';
    }
  }

  RunManifest manifest;
  manifest.subcommand = "varcompare";
  manifest.options = {{"model", args.model},
                      {"data", args.data.empty() ? "-" : args.data},
                      {"result", args.result.empty() ? "-" : args.result},
                      {"draws", std::to_string(args.draws)},
                      {"components", args.components.empty() ? "-" : args.components},
                      {"at-optimum", args.at_optimum ? "1" : "0"},
                      {"seed", std::to_string(args.seed)}};
  if (args.model == "gaussian-test") {
    manifest.options.emplace_back("gt-kind", args.gt.kind);
    manifest.options.emplace_back("gt-dim", std::to_string(args.gt.dim));
    manifest.options.emplace_back("gt-seed", std::to_string(args.gt.seed));
  }
  add_artifacts(manifest, args.out, {"draws.csv", "ratios.csv"});
  write_manifest(join_path(args.out, "manifest.txt"), manifest);

  std::cout << "varcompare " << args.model << ": " << components.size() << " components x "
            << args.draws << " draws, outputs in " << args.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string family = "ssm";
  std::string sizes = "500,1000,2000";
  std::string algorithms = "alg1-mf,alg1-full,alg2";
  std::string out;
  std::int64_t iters = 200;
  int estimator = 2;
  std::uint64_t seed = 5;
};

int run_bench_command(const BenchArgs& args) {
  if (args.family != "glmm" && args.family != "ssm")
    throw CLI::ValidationError("--family", "must be glmm or ssm");

  std::vector<index_t> sizes;
  {
    std::stringstream ss(args.sizes);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const long v = std::strtol(item.c_str(), nullptr, 10);
      if (v < 8) throw DataError("--sizes: size " + item + " too small");
      sizes.push_back(static_cast<index_t>(v));
    }
  }
  std::vector<Algorithm> algorithms;
  {
    std::stringstream ss(args.algorithms);
    std::string item;
    while (std::getline(ss, item, ',')) {
      Algorithm a;
      if (!algorithm_from_string(item, a))
        throw CLI::ValidationError("--algorithms", "unknown algorithm '" + item + "'");
      algorithms.push_back(a);
    }
  }

  ensure_dir(args.out);
  std::ofstream times(join_path(args.out, "bench_times.csv"), std::ios::binary);
  std::ofstream counts(join_path(args.out, "bench_counts.csv"), std::ios::binary);
  times << "family,n,dim,algorithm,estimator,iters,seconds_total,us_per_iter\n";
  counts << "family,n,dim,algorithm,nnz,touched_per_iter\n";

  for (const index_t n : sizes) {
    std::unique_ptr<TargetModel> model;
    if (args.family == "glmm") {
      model = std::make_unique<GlmmModel>(make_logistic_glmm(n, 4, 4, args.seed));
    } else {
      model = std::make_unique<SvModel>(make_sv_series(n, args.seed));
    }
    for (const Algorithm algorithm : algorithms) {
      FitConfig config;
      config.algorithm = algorithm;
      config.estimator = args.estimator == 1 ? Estimator::family1 : Estimator::family2;
      config.rng_seed = args.seed;
      config.max_iterations = args.iters;
      config.window = args.iters;  // a single window: the stopping rule never fires
      config.patience = 3;

      reset_touched_nonzeros();
      const auto start = std::chrono::steady_clock::now();
      const FitResult result = run_fit(*model, config);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const double touched_per_iter =
          static_cast<double>(touched_nonzeros()) / static_cast<double>(args.iters);

      times << args.family << ',' << n << ',' << model->dim() << ',' << to_string(algorithm)
            << ',' << args.estimator << ',' << args.iters << ',' << format_double(seconds) << ','
            << format_double(1e6 * seconds / static_cast<double>(args.iters)) << '\n';
      counts << args.family << ',' << n << ',' << model->dim() << ',' << to_string(algorithm)
             << ',' << result.factor.pattern().nnz() << ',' << format_double(touched_per_iter)
             << '\n';
    }
  }
  times.close();
  counts.close();

  RunManifest manifest;
  manifest.subcommand = "bench";
  manifest.options = {{"family", args.family},   {"sizes", args.sizes},
                      {"algorithms", args.algorithms}, {"iters", std::to_string(args.iters)},
                      {"estimator", std::to_string(args.estimator)}, {"seed", std::to_string(args.seed)}};
  // Timing columns are hardware noise; only the counts file is checksummed.
  add_artifacts(manifest, args.out, {"bench_counts.csv"});
  add_artifacts(manifest, args.out, {"bench_times.csv"}, /*checksum=*/false);
  write_manifest(join_path(args.out, "manifest.txt"), manifest);

  std::cout << "bench " << args.family << " sizes " << args.sizes << ", outputs in " << args.out
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// replay

int run_replay_command(const std::string& manifest_path, const std::string& out,
                       const std::string& exe_hint);

// ---------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args);

int run_replay_command(const std::string& manifest_path, const std::string& out,
                       const std::string& exe_hint) {
  const RunManifest manifest = load_manifest(manifest_path);
  std::vector<std::string> argv = {exe_hint, manifest.subcommand};
  for (const auto& [k, v] : manifest.options) {
    if (v == "-") continue;
    if (k == "at-optimum") {
      if (v == "1") argv.push_back("--at-optimum");
      continue;
    }
    argv.push_back("--" + k);
    argv.push_back(v);
  }
  argv.push_back("--out");
  argv.push_back(out);
  const int code = dispatch(argv);
  if (code != kExitOk) return code;

  for (const auto& [file, recorded] : manifest.artifacts) {
    if (recorded == "-") continue;
    const std::string now = file_checksum(join_path(out, file));
    if (now != recorded) {
      std::cerr << "replay: checksum mismatch for " << file << " (recorded " << recorded
                << ", got " << now << ")\n";
      return kExitData;
    }
  }
  std::cout << "replay: outputs match recorded checksums\n";
  return kExitOk;
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Gaussian variational approximation with sparse precision factors"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "run one stochastic-gradient fit");
  fit_cmd->add_option("--model", fit_args.model,
                      "epilepsy1|epilepsy2|toenail|polypharmacy|sv|gaussian-test")->required();
  fit_cmd->add_option("--data", fit_args.data, "dataset CSV path");
  fit_cmd->add_option("--algorithm", fit_args.algorithm, "alg1-mf|alg1-full|alg2");
  fit_cmd->add_option("--estimator", fit_args.estimator, "gradient estimator family (1 or 2)")
      ->check(CLI::Range(1, 2));
  fit_cmd->add_option("--seed", fit_args.seed, "RNG seed");
  fit_cmd->add_option("--max-iter", fit_args.max_iter, "iteration cap N");
  fit_cmd->add_option("--window", fit_args.window, "lower-bound averaging window F");
  fit_cmd->add_option("--patience", fit_args.patience, "consecutive sub-max windows M");
  fit_cmd->add_option("--draws-per-iter", fit_args.draws_per_iter, "gradient draws per iteration");
  fit_cmd->add_option("--out", fit_args.out, "output directory");
  fit_cmd->add_option("--gt-kind", fit_args.gt.kind, "gaussian-test target kind");
  fit_cmd->add_option("--gt-dim", fit_args.gt.dim, "gaussian-test dimension");
  fit_cmd->add_option("--gt-seed", fit_args.gt.seed, "gaussian-test construction seed");

  GradcheckArgs gc_args;
  auto* gc_cmd = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gc_cmd->add_option("--model", gc_args.model, "model tag")->required();
  gc_cmd->add_option("--data", gc_args.data, "dataset CSV path");
  gc_cmd->add_option("--points", gc_args.points, "random evaluation points");
  gc_cmd->add_option("--step", gc_args.step, "central difference step");
  gc_cmd->add_option("--seed", gc_args.seed, "RNG seed");
  gc_cmd->add_option("--out", gc_args.out, "output directory");
  gc_cmd->add_option("--gt-kind", gc_args.gt.kind, "gaussian-test target kind");
  gc_cmd->add_option("--gt-dim", gc_args.gt.dim, "gaussian-test dimension");
  gc_cmd->add_option("--gt-seed", gc_args.gt.seed, "gaussian-test construction seed");

  VarcompareArgs vc_args;
  auto* vc_cmd = app.add_subcommand("varcompare", "paired estimator-variance experiment");
  vc_cmd->add_option("--model", vc_args.model, "model tag")->required();
  vc_cmd->add_option("--data", vc_args.data, "dataset CSV path");
  vc_cmd->add_option("--result", vc_args.result, "completed fit result file");
  vc_cmd->add_option("--draws", vc_args.draws, "number of paired draws");
  vc_cmd->add_option("--components", vc_args.components, "1-based indices, comma list or 'all'");
  vc_cmd->add_flag("--at-optimum", vc_args.at_optimum, "use the true (mu*, T*) of gaussian-test");
  vc_cmd->add_option("--seed", vc_args.seed, "RNG seed");
  vc_cmd->add_option("--out", vc_args.out, "output directory");
  vc_cmd->add_option("--gt-kind", vc_args.gt.kind, "gaussian-test target kind");
  vc_cmd->add_option("--gt-dim", vc_args.gt.dim, "gaussian-test dimension");
  vc_cmd->add_option("--gt-seed", vc_args.gt.seed, "gaussian-test construction seed");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "synthetic scaling benchmark");
  bench_cmd->add_option("--family", bench_args.family, "glmm|ssm");
  bench_cmd->add_option("--sizes", bench_args.sizes, "comma list of n");
  bench_cmd->add_option("--algorithms", bench_args.algorithms, "comma list of algorithms");
  bench_cmd->add_option("--iters", bench_args.iters, "iterations per run");
  bench_cmd->add_option("--estimator", bench_args.estimator, "estimator family")
      ->check(CLI::Range(1, 2));
  bench_cmd->add_option("--seed", bench_args.seed, "RNG seed");
  bench_cmd->add_option("--out", bench_args.out, "output directory");

  std::string replay_manifest, replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a recorded manifest");
  replay_cmd->add_option("--manifest", replay_manifest, "manifest file")->required();
  replay_cmd->add_option("--out", replay_out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit_cmd) {
      if (fit_args.out.empty()) fit_args.out = default_out_dir();
      return run_fit_command(fit_args);
    }
    if (*gc_cmd) {
      if (gc_args.out.empty()) gc_args.out = default_out_dir();
      return run_gradcheck_command(gc_args);
    }
    if (*vc_cmd) {
      if (vc_args.out.empty()) vc_args.out = default_out_dir();
      return run_varcompare_command(vc_args);
    }
    if (*bench_cmd) {
      if (bench_args.out.empty()) bench_args.out = default_out_dir();
      return run_bench_command(bench_args);
    }
    if (*replay_cmd) {
      if (replay_out.empty()) replay_out = default_out_dir();
      return run_replay_command(replay_manifest, replay_out, args.front());
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace

int cli_run(const std::vector<std::string>& args) { return dispatch(args); }

}  // namespace gva
