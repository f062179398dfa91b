#include "gva/result_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gva/errors.hpp"

namespace gva {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

void expect(std::istream& is, const std::string& token, const std::string& path) {
  std::string got;
  if (!(is >> got) || got != token)
    throw DataError(path + ": expected '" + token + "', got '" + got + "'");
}

}  // namespace

void write_fit_result(const std::string& path, const FitResult& result) {
  auto out = open_out(path);
  out << "gva-fit-result v1\n";
  out << "algorithm " << to_string(result.algorithm) << '\n';
  out << "estimator " << (result.estimator == Estimator::family1 ? 1 : 2) << '\n';
  out << "seed " << result.rng_seed << '\n';
  out << "termination " << to_string(result.termination) << '\n';
  out << "iterations " << result.iterations_used << '\n';
  out << "window " << result.window << '\n';
  out << "patience " << result.patience << '\n';
  out << "parameterization " << (result.precision ? "precision" : "covariance") << '\n';
  out << "dim " << result.factor.dim() << '\n';
  out << "mu " << result.mu.size() << '\n';
  for (double v : result.mu) out << format_double(v) << '\n';
  out << "factor ";
  save_triplets(out, result.factor);
  out << "lbar-trace " << result.lbar_trace.size() << '\n';
  for (std::size_t w = 0; w < result.lbar_trace.size(); ++w) {
    out << (w + 1) << ' ' << format_double(result.lbar_trace[w]) << '\n';
  }
  out << "end\n";
}

FitResult load_fit_result(const std::string& path) {
  auto in = open_in(path);
  std::string token;
  expect(in, "gva-fit-result", path);
  expect(in, "v1", path);

  std::string algorithm_name, termination_name, parameterization;
  int estimator_num = 2;
  std::uint64_t seed = 0;
  std::int64_t iterations = 0, window = 0;
  int patience = 0;
  index_t dim = 0;

  expect(in, "algorithm", path);
  in >> algorithm_name;
  expect(in, "estimator", path);
  in >> estimator_num;
  expect(in, "seed", path);
  in >> seed;
  expect(in, "termination", path);
  in >> termination_name;
  expect(in, "iterations", path);
  in >> iterations;
  expect(in, "window", path);
  in >> window;
  expect(in, "patience", path);
  in >> patience;
  expect(in, "parameterization", path);
  in >> parameterization;
  expect(in, "dim", path);
  in >> dim;
  if (!in) throw DataError(path + ": malformed header");

  expect(in, "mu", path);
  std::size_t mu_len = 0;
  in >> mu_len;
  DenseVector mu(mu_len);
  for (double& v : mu)
    if (!(in >> v)) throw DataError(path + ": truncated mu");

  expect(in, "factor", path);
  CholeskyFactor factor = load_triplets(in);

  expect(in, "lbar-trace", path);
  std::size_t trace_len = 0;
  in >> trace_len;
  std::vector<double> trace(trace_len);
  for (std::size_t w = 0; w < trace_len; ++w) {
    std::size_t idx = 0;
    if (!(in >> idx >> trace[w])) throw DataError(path + ": truncated trace");
  }
  expect(in, "end", path);

  Algorithm algorithm;
  Termination termination;
  if (!algorithm_from_string(algorithm_name, algorithm))
    throw DataError(path + ": unknown algorithm '" + algorithm_name + "'");
  if (!termination_from_string(termination_name, termination))
    throw DataError(path + ": unknown termination '" + termination_name + "'");
  if (factor.dim() != dim || mu.size() != static_cast<std::size_t>(dim))
    throw DataError(path + ": inconsistent dimensions");

  return FitResult{std::move(mu),
                   std::move(factor),
                   parameterization == "precision",
                   std::move(trace),
                   termination,
                   iterations,
                   seed,
                   algorithm,
                   estimator_num == 1 ? Estimator::family1 : Estimator::family2,
                   window,
                   patience};
}

void write_summary_csv(const std::string& path, const DenseVector& mu, const DenseVector& sd) {
  auto out = open_out(path);
  out << "index,mu,sd\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out << (i + 1) << ',' << format_double(mu[i]) << ',' << format_double(sd[i]) << '\n';
  }
}

void write_trace_csv(const std::string& path, const std::vector<double>& trace,
                     std::int64_t window_size) {
  auto out = open_out(path);
  out << "window,iteration,lbar\n";
  for (std::size_t w = 0; w < trace.size(); ++w) {
    out << (w + 1) << ',' << (static_cast<std::int64_t>(w + 1) * window_size) << ','
        << format_double(trace[w]) << '\n';
  }
}

void write_volatility_band_csv(const std::string& path, const DenseVector& mu,
                               const DenseVector& sd, index_t n) {
  auto out = open_out(path);
  out << "t,mean,lower,upper\n";
  for (index_t t = 0; t < n; ++t) {
    out << (t + 1) << ',' << format_double(mu[t]) << ',' << format_double(mu[t] - sd[t]) << ','
        << format_double(mu[t] + sd[t]) << '\n';
  }
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::string file_checksum(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a64(content.data(), content.size())));
  return buf;
}

const std::string* RunManifest::find_option(const std::string& key) const {
  for (const auto& [k, v] : options)
    if (k == key) return &v;
  return nullptr;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  auto out = open_out(path);
  out << "gva-run-manifest v1\n";
  out << "subcommand " << manifest.subcommand << '\n';
  for (const auto& [k, v] : manifest.options) out << "option " << k << ' ' << v << '\n';
  for (const auto& [file, sum] : manifest.artifacts) out << "artifact " << file << ' ' << sum << '\n';
  out << "end\n";
}

RunManifest load_manifest(const std::string& path) {
  auto in = open_in(path);
  expect(in, "gva-run-manifest", path);
  expect(in, "v1", path);
  RunManifest m;
  std::string kind;
  while (in >> kind) {
    if (kind == "end") return m;
    if (kind == "subcommand") {
      in >> m.subcommand;
    } else if (kind == "option") {
      std::string k, v;
      in >> k >> v;
      m.options.emplace_back(k, v);
    } else if (kind == "artifact") {
      std::string f, s;
      in >> f >> s;
      m.artifacts.emplace_back(f, s);
    } else {
      throw DataError(path + ": unknown manifest line '" + kind + "'");
    }
  }
  throw DataError(path + ": missing 'end'");
}

}  // namespace gva
