#pragma once

// Plain-text artifact formats: fit result files, posterior summaries,
// lower-bound traces, volatility bands, and run manifests. All files are
// UTF-8 with LF line endings; doubles are printed with %.17g so reruns are
// byte-identical and values round-trip exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "gva/fit.hpp"

namespace gva {

std::string format_double(double v);  // %.17g

void write_fit_result(const std::string& path, const FitResult& result);
FitResult load_fit_result(const std::string& path);

// index,mu,sd per component (1-based index).
void write_summary_csv(const std::string& path, const DenseVector& mu, const DenseVector& sd);

// window,iteration,lbar rows, iteration = window * window_size.
void write_trace_csv(const std::string& path, const std::vector<double>& trace,
                     std::int64_t window_size);

// t,mean,lower,upper for the first n components of mu (the latent states).
void write_volatility_band_csv(const std::string& path, const DenseVector& mu,
                               const DenseVector& sd, index_t n);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string file_checksum(const std::string& path);  // "fnv1a:<16 hex digits>"

struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> options;   // flag -> value, ordered
  std::vector<std::pair<std::string, std::string>> artifacts; // file -> checksum or "-"

  const std::string* find_option(const std::string& key) const;
};

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest load_manifest(const std::string& path);

}  // namespace gva
