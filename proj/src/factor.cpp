#include "gva/factor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gva/errors.hpp"

namespace gva {

namespace {

// Guard against silent Inf propagation through a near-singular solve.
constexpr double kDiagFloor = 1e-30;

thread_local nnz_t g_touched = 0;

void check_solveable(const CholeskyFactor& T) {
  for (index_t j = 0; j < T.dim(); ++j) {
    const double d = T.diag(j);
    if (!std::isfinite(d) || std::abs(d) < kDiagFloor) {
      throw SingularFactorError("factor diagonal entry " + std::to_string(j + 1) +
                                " is zero or non-finite");
    }
  }
}

void check_length(std::size_t got, index_t dim, const char* what) {
  if (got != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument(std::string(what) + ": vector length does not match factor dim");
  }
}

}  // namespace

namespace detail {
void count_touches(nnz_t n) { g_touched += n; }
}  // namespace detail

nnz_t touched_nonzeros() { return g_touched; }
void reset_touched_nonzeros() { g_touched = 0; }

CholeskyFactor::CholeskyFactor(PatternPtr pattern, std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (!pattern_) throw std::invalid_argument("CholeskyFactor: null pattern");
  if (values_.size() != static_cast<std::size_t>(pattern_->nnz()))
    throw std::invalid_argument("CholeskyFactor: value count does not match pattern");
}

CholeskyFactor CholeskyFactor::identity(PatternPtr pattern) {
  std::vector<double> values(static_cast<std::size_t>(pattern->nnz()), 0.0);
  for (index_t j = 0; j < pattern->dim(); ++j)
    values[static_cast<std::size_t>(pattern->diag_pos(j))] = 1.0;
  return CholeskyFactor(std::move(pattern), std::move(values));
}

void CholeskyFactor::validate() const {
  for (index_t j = 0; j < dim(); ++j) {
    const double d = diag(j);
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::invalid_argument("factor diagonal entry " + std::to_string(j + 1) +
                                  " is not strictly positive");
  }
}

void solve_direct(const CholeskyFactor& T, std::span<const double> g, std::span<double> x) {
  const SparsityPattern& p = T.pattern();
  const index_t d = p.dim();
  check_length(g.size(), d, "solve_direct");
  check_length(x.size(), d, "solve_direct");
  check_solveable(T);
  const auto& col_ptr = p.col_ptr();
  const auto& row = p.row_idx();
  const auto val = T.values();
  if (x.data() != g.data()) std::copy(g.begin(), g.end(), x.begin());
  for (index_t j = 0; j < d; ++j) {
    const nnz_t diag = col_ptr[j];
    const double xj = x[j] / val[static_cast<std::size_t>(diag)];
    x[j] = xj;
    for (nnz_t e = diag + 1; e < col_ptr[j + 1]; ++e) {
      x[row[static_cast<std::size_t>(e)]] -= val[static_cast<std::size_t>(e)] * xj;
    }
  }
  detail::count_touches(p.nnz());
}

void solve_transposed(const CholeskyFactor& T, std::span<const double> s, std::span<double> x) {
  const SparsityPattern& p = T.pattern();
  const index_t d = p.dim();
  check_length(s.size(), d, "solve_transposed");
  check_length(x.size(), d, "solve_transposed");
  check_solveable(T);
  const auto& col_ptr = p.col_ptr();
  const auto& row = p.row_idx();
  const auto val = T.values();
  for (index_t j = d - 1; j >= 0; --j) {
    const nnz_t diag = col_ptr[j];
    double acc = 0.0;
    for (nnz_t e = diag + 1; e < col_ptr[j + 1]; ++e) {
      acc += val[static_cast<std::size_t>(e)] * x[row[static_cast<std::size_t>(e)]];
    }
    x[j] = (s[j] - acc) / val[static_cast<std::size_t>(diag)];
  }
  detail::count_touches(p.nnz());
}

void multiply(const CholeskyFactor& T, std::span<const double> s, std::span<double> y) {
  const SparsityPattern& p = T.pattern();
  const index_t d = p.dim();
  check_length(s.size(), d, "multiply");
  check_length(y.size(), d, "multiply");
  const auto& col_ptr = p.col_ptr();
  const auto& row = p.row_idx();
  const auto val = T.values();
  std::fill(y.begin(), y.end(), 0.0);
  for (index_t j = 0; j < d; ++j) {
    const double sj = s[j];
    for (nnz_t e = col_ptr[j]; e < col_ptr[j + 1]; ++e) {
      y[row[static_cast<std::size_t>(e)]] += val[static_cast<std::size_t>(e)] * sj;
    }
  }
  detail::count_touches(p.nnz());
}

void multiply_transposed(const CholeskyFactor& T, std::span<const double> s, std::span<double> y) {
  const SparsityPattern& p = T.pattern();
  const index_t d = p.dim();
  check_length(s.size(), d, "multiply_transposed");
  check_length(y.size(), d, "multiply_transposed");
  const auto& col_ptr = p.col_ptr();
  const auto& row = p.row_idx();
  const auto val = T.values();
  for (index_t j = 0; j < d; ++j) {
    double acc = 0.0;
    for (nnz_t e = col_ptr[j]; e < col_ptr[j + 1]; ++e) {
      acc += val[static_cast<std::size_t>(e)] * s[row[static_cast<std::size_t>(e)]];
    }
    y[j] = acc;
  }
  detail::count_touches(p.nnz());
}

DenseVector solve_direct(const CholeskyFactor& T, std::span<const double> g) {
  DenseVector x(static_cast<std::size_t>(T.dim()));
  solve_direct(T, g, x);
  return x;
}

DenseVector solve_transposed(const CholeskyFactor& T, std::span<const double> s) {
  DenseVector x(static_cast<std::size_t>(T.dim()));
  solve_transposed(T, s, x);
  return x;
}

DenseVector multiply(const CholeskyFactor& T, std::span<const double> s) {
  DenseVector y(static_cast<std::size_t>(T.dim()));
  multiply(T, s, y);
  return y;
}

DenseVector multiply_transposed(const CholeskyFactor& T, std::span<const double> s) {
  DenseVector y(static_cast<std::size_t>(T.dim()));
  multiply_transposed(T, s, y);
  return y;
}

DenseVector marginal_variances(const CholeskyFactor& T) {
  const index_t d = T.dim();
  check_solveable(T);
  DenseVector unit(static_cast<std::size_t>(d), 0.0);
  DenseVector col(static_cast<std::size_t>(d));
  DenseVector out(static_cast<std::size_t>(d));
  for (index_t i = 0; i < d; ++i) {
    unit[i] = 1.0;
    solve_direct(T, unit, col);  // column i of T^{-1}
    double acc = 0.0;
    for (double v : col) acc += v * v;
    out[i] = acc;
    unit[i] = 0.0;
  }
  return out;
}

DenseVector marginal_variances_covariance(const CholeskyFactor& L) {
  const SparsityPattern& p = L.pattern();
  DenseVector out(static_cast<std::size_t>(p.dim()), 0.0);
  const auto val = L.values();
  const auto& row = p.row_idx();
  for (std::size_t e = 0; e < row.size(); ++e) {
    out[static_cast<std::size_t>(row[e])] += val[e] * val[e];
  }
  detail::count_touches(p.nnz());
  return out;
}

double log_det(const CholeskyFactor& T) {
  double acc = 0.0;
  for (index_t j = 0; j < T.dim(); ++j) acc += std::log(T.diag(j));
  return acc;
}

void save_triplets(std::ostream& os, const CholeskyFactor& factor) {
  const SparsityPattern& p = factor.pattern();
  os << p.dim() << ' ' << p.nnz() << '\n';
  const auto val = factor.values();
  char buf[40];
  for (std::size_t e = 0; e < val.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%.17g", val[e]);
    os << (p.row_idx()[e] + 1) << ' ' << (p.col_idx()[e] + 1) << ' ' << buf << '\n';
  }
}

void save_pattern(std::ostream& os, const SparsityPattern& pattern) {
  os << pattern.dim() << ' ' << pattern.nnz() << '\n';
  for (std::size_t e = 0; e < pattern.row_idx().size(); ++e) {
    os << (pattern.row_idx()[e] + 1) << ' ' << (pattern.col_idx()[e] + 1) << " 1\n";
  }
}

SparsityPattern load_pattern(std::istream& is) {
  const CholeskyFactor factor = load_triplets(is);
  return factor.pattern();
}

CholeskyFactor load_triplets(std::istream& is) {
  index_t dim = 0;
  nnz_t nnz = 0;
  if (!(is >> dim >> nnz) || dim < 1 || nnz < dim)
    throw DataError("triplet file: bad header");
  std::vector<std::pair<index_t, index_t>> entries;
  std::vector<std::pair<std::pair<index_t, index_t>, double>> triplets;
  entries.reserve(static_cast<std::size_t>(nnz));
  triplets.reserve(static_cast<std::size_t>(nnz));
  for (nnz_t e = 0; e < nnz; ++e) {
    index_t r = 0, c = 0;
    double v = 0.0;
    if (!(is >> r >> c >> v)) throw DataError("triplet file: truncated at entry " + std::to_string(e + 1));
    if (r < 1 || r > dim || c < 1 || c > r)
      throw DataError("triplet file: entry " + std::to_string(e + 1) + " (" + std::to_string(r) +
                      "," + std::to_string(c) + ") is not lower-triangular in range");
    entries.emplace_back(r - 1, c - 1);
    triplets.push_back({{r - 1, c - 1}, v});
  }
  auto pattern = share(SparsityPattern::from_entries(dim, entries));
  if (pattern->nnz() != nnz) throw DataError("triplet file: duplicate entries");
  std::vector<double> values(static_cast<std::size_t>(nnz), 0.0);
  for (const auto& [rc, v] : triplets) {
    values[static_cast<std::size_t>(pattern->position(rc.first, rc.second))] = v;
  }
  return CholeskyFactor(std::move(pattern), std::move(values));
}

}  // namespace gva
