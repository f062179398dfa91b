#pragma once

// Minimal strict CSV ingestion: UTF-8, header row, comma separators, numeric
// cells. Errors carry the offending row number.

#include <string>
#include <vector>

#include "gva/types.hpp"

namespace gva {

struct LongitudinalTable {
  std::vector<std::string> columns;
  std::vector<DenseVector> data;  // one vector per column, row-aligned
  std::size_t rows = 0;

  bool has_column(const std::string& name) const;
  const DenseVector& col(const std::string& name) const;  // throws DataError if absent
};

// Loads a CSV and verifies every name in `required` is present. Rows are
// kept in file order.
LongitudinalTable load_csv(const std::string& path, const std::vector<std::string>& required);

struct SubjectIndex {
  std::vector<index_t> subject_of_row;    // 0-based contiguous ids, row-aligned
  std::vector<double> original_id;        // per new id, the id as it appeared
  index_t n_subjects = 0;
};

// Re-indexes arbitrary numeric subject ids to 1..n in order of first
// appearance, retaining the mapping.
SubjectIndex reindex_subjects(const DenseVector& ids);

}  // namespace gva
