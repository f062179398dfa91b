#pragma once

// Dataset-specific design matrix builders for the bundled studies, plus the
// mean-corrected returns transform for exchange-rate series. CSV schemas are
// documented in data/README.md.

#include <string>

#include "gva/csv.hpp"
#include "gva/glmm.hpp"
#include "gva/sv.hpp"

namespace gva {

enum class EpilepsyVariant { model1, model2 };

// Poisson GLMM for the epilepsy seizure-count study.
// Columns: id, visit (1..4), y, base (raw baseline count), trt, age (years).
// Covariates: Base = log(base/4), Age = log(age) centered over subjects,
// Visit coded (-0.3, -0.1, 0.1, 0.3), V4 = indicator of visit 4.
// Model I:  X = (1, Base, Trt, Age, Base*Trt, V4),    Z = (1)
// Model II: X = (1, Base, Trt, Age, Base*Trt, Visit), Z = (1, Visit)
GlmmSpec build_epilepsy_model(const LongitudinalTable& table, EpilepsyVariant variant);

// Bernoulli-logit GLMM for the toenail infection study.
// Columns: id, visit, month, trt, severity (0..3).
// Response is 1 iff severity is moderate or worse (>= 2).
// X = (1, Trt, t, Trt*t) with t = months, Z = (1).
GlmmSpec build_toenail_model(const LongitudinalTable& table);

// Bernoulli-logit GLMM for the polypharmacy study.
// Columns: id, year, y, gender, race, age, mhv (outpatient visit count),
// inptmhv (0/1). X = (1, Gender, Race, Age, MHV_1, MHV_2, MHV_3, INPTMHV)
// with MHV_1 = [1 <= mhv <= 5], MHV_2 = [6 <= mhv <= 14], MHV_3 = [mhv >= 15];
// Z = (1).
GlmmSpec build_polypharmacy_model(const LongitudinalTable& table);

struct ReturnSeries {
  DenseVector rates;  // raw series r_t
  DenseVector y;      // mean-corrected returns, length rates.size() - 1
};

// y_t = 100 * (log(r_t / r_{t-1}) - mean of all log ratios). Throws DataError
// on a non-positive rate.
ReturnSeries mean_corrected_returns(const DenseVector& rates);

// Loads a single-column CSV of rates (column "rate") and builds the SV spec.
SvSpec load_sv_spec(const std::string& path);

// Writes a ReturnSeries as two-column CSV (t, y).
void save_return_series(const std::string& path, const ReturnSeries& series);

}  // namespace gva
