#include "gva/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gva/errors.hpp"

namespace gva {

namespace {

// Groups rows by re-indexed subject, preserving file order within a subject.
struct Grouping {
  SubjectIndex index;
  std::vector<std::vector<std::size_t>> rows_of_subject;
};

Grouping group_by_subject(const LongitudinalTable& table, const std::string& id_col) {
  Grouping g;
  g.index = reindex_subjects(table.col(id_col));
  g.rows_of_subject.resize(static_cast<std::size_t>(g.index.n_subjects));
  for (std::size_t r = 0; r < table.rows; ++r) {
    g.rows_of_subject[static_cast<std::size_t>(g.index.subject_of_row[r])].push_back(r);
  }
  return g;
}

GlmmSpec assemble(GlmmFamily family, const Grouping& g, const DenseVector& y,
                  const std::vector<DenseVector>& x_cols, const std::vector<DenseVector>& z_cols) {
  GlmmSpec spec;
  spec.family = family;
  spec.n_subjects = g.index.n_subjects;
  spec.k_beta = static_cast<index_t>(x_cols.size());
  spec.p = static_cast<index_t>(z_cols.size());
  spec.obs_offset.resize(static_cast<std::size_t>(spec.n_subjects) + 1, 0);
  for (index_t i = 0; i < spec.n_subjects; ++i) {
    spec.obs_offset[i + 1] = spec.obs_offset[i] + static_cast<nnz_t>(g.rows_of_subject[i].size());
  }
  const std::size_t n_obs = y.size();
  spec.y.reserve(n_obs);
  spec.X.reserve(n_obs * x_cols.size());
  spec.Z.reserve(n_obs * z_cols.size());
  for (index_t i = 0; i < spec.n_subjects; ++i) {
    for (std::size_t r : g.rows_of_subject[i]) {
      spec.y.push_back(y[r]);
      for (const auto& c : x_cols) spec.X.push_back(c[r]);
      for (const auto& c : z_cols) spec.Z.push_back(c[r]);
    }
  }
  spec.validate();
  return spec;
}

}  // namespace

GlmmSpec build_epilepsy_model(const LongitudinalTable& table, EpilepsyVariant variant) {
  const auto g = group_by_subject(table, "id");
  const auto& visit = table.col("visit");
  const auto& y = table.col("y");
  const auto& base = table.col("base");
  const auto& trt = table.col("trt");
  const auto& age = table.col("age");
  const std::size_t n_rows = table.rows;

  // Age centered over subjects: one value per subject, mean over subjects.
  std::vector<double> log_age_subject(static_cast<std::size_t>(g.index.n_subjects));
  for (index_t i = 0; i < g.index.n_subjects; ++i) {
    const std::size_t first_row = g.rows_of_subject[i].front();
    if (age[first_row] <= 0.0) throw DataError("epilepsy: non-positive age");
    log_age_subject[i] = std::log(age[first_row]);
  }
  double age_mean = 0.0;
  for (double a : log_age_subject) age_mean += a;
  age_mean /= static_cast<double>(g.index.n_subjects);

  DenseVector ones(n_rows, 1.0), base_c(n_rows), age_c(n_rows), base_trt(n_rows), v4(n_rows),
      visit_c(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (base[r] <= 0.0) throw DataError("epilepsy: non-positive baseline count");
    base_c[r] = std::log(base[r] / 4.0);
    age_c[r] = log_age_subject[static_cast<std::size_t>(g.index.subject_of_row[r])] - age_mean;
    base_trt[r] = base_c[r] * trt[r];
    const int v = static_cast<int>(visit[r]);
    if (v < 1 || v > 4) throw DataError("epilepsy: visit must be 1..4");
    v4[r] = v == 4 ? 1.0 : 0.0;
    visit_c[r] = -0.3 + 0.2 * (v - 1);  // -0.3, -0.1, 0.1, 0.3
  }

  if (variant == EpilepsyVariant::model1) {
    return assemble(GlmmFamily::poisson_log, g, y,
                    {ones, base_c, table.col("trt"), age_c, base_trt, v4}, {ones});
  }
  return assemble(GlmmFamily::poisson_log, g, y,
                  {ones, base_c, table.col("trt"), age_c, base_trt, visit_c}, {ones, visit_c});
}

GlmmSpec build_toenail_model(const LongitudinalTable& table) {
  const auto g = group_by_subject(table, "id");
  const auto& severity = table.col("severity");
  const auto& trt = table.col("trt");
  const auto& month = table.col("month");
  const std::size_t n_rows = table.rows;

  DenseVector ones(n_rows, 1.0), y(n_rows), trt_t(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (severity[r] < 0.0 || severity[r] > 3.0 || severity[r] != std::floor(severity[r]))
      throw DataError("toenail: severity must be an integer 0..3");
    y[r] = severity[r] >= 2.0 ? 1.0 : 0.0;  // moderate or severe
    trt_t[r] = trt[r] * month[r];
  }
  return assemble(GlmmFamily::bernoulli_logit, g, y, {ones, trt, month, trt_t}, {ones});
}

GlmmSpec build_polypharmacy_model(const LongitudinalTable& table) {
  const auto g = group_by_subject(table, "id");
  const auto& y = table.col("y");
  const auto& mhv = table.col("mhv");
  const auto& inpt = table.col("inptmhv");
  const std::size_t n_rows = table.rows;

  DenseVector ones(n_rows, 1.0), mhv1(n_rows), mhv2(n_rows), mhv3(n_rows), inptb(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const double m = mhv[r];
    if (m < 0.0 || m != std::floor(m)) throw DataError("polypharmacy: bad mhv count");
    mhv1[r] = (m >= 1.0 && m <= 5.0) ? 1.0 : 0.0;
    mhv2[r] = (m >= 6.0 && m <= 14.0) ? 1.0 : 0.0;
    mhv3[r] = m >= 15.0 ? 1.0 : 0.0;
    inptb[r] = inpt[r] != 0.0 ? 1.0 : 0.0;
  }
  return assemble(GlmmFamily::bernoulli_logit, g, y,
                  {ones, table.col("gender"), table.col("race"), table.col("age"), mhv1, mhv2,
                   mhv3, inptb},
                  {ones});
}

ReturnSeries mean_corrected_returns(const DenseVector& rates) {
  if (rates.size() < 2) throw DataError("return series needs at least 2 rates");
  ReturnSeries out;
  out.rates = rates;
  const std::size_t n = rates.size() - 1;
  out.y.resize(n);
  double mean = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (rates[t] <= 0.0 || rates[t + 1] <= 0.0)
      throw DataError("return series: non-positive rate at position " + std::to_string(t + 1));
    out.y[t] = std::log(rates[t + 1] / rates[t]);
    mean += out.y[t];
  }
  mean /= static_cast<double>(n);
  for (double& v : out.y) v = 100.0 * (v - mean);
  return out;
}

SvSpec load_sv_spec(const std::string& path) {
  const LongitudinalTable table = load_csv(path, {"rate"});
  const ReturnSeries series = mean_corrected_returns(table.col("rate"));
  SvSpec spec;
  spec.y = series.y;
  spec.validate();
  return spec;
}

void save_return_series(const std::string& path, const ReturnSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "t,y\n";
  char buf[40];
  for (std::size_t t = 0; t < series.y.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", series.y[t]);
    out << (t + 1) << ',' << buf << '\n';
  }
}

}  // namespace gva
