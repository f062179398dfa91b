#include "gva/csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "gva/errors.hpp"

namespace gva {

bool LongitudinalTable::has_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

const DenseVector& LongitudinalTable::col(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return data[i];
  throw DataError("missing column '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

LongitudinalTable load_csv(const std::string& path, const std::vector<std::string>& required) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  LongitudinalTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.columns = split_line(line);
  table.data.resize(table.columns.size());

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != table.columns.size())
      throw DataError(path + ": row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(table.columns.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const char* begin = fields[i].data();
      const char* end = begin + fields[i].size();
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc{} || ptr != end)
        throw DataError(path + ": row " + std::to_string(row) + ", column '" + table.columns[i] +
                        "': cannot parse '" + fields[i] + "'");
      table.data[i].push_back(v);
    }
    ++table.rows;
  }

  for (const auto& name : required) {
    if (!table.has_column(name))
      throw DataError(path + ": missing required column '" + name + "'");
  }
  return table;
}

SubjectIndex reindex_subjects(const DenseVector& ids) {
  SubjectIndex idx;
  idx.subject_of_row.reserve(ids.size());
  std::map<double, index_t> seen;
  for (double id : ids) {
    auto [it, inserted] = seen.try_emplace(id, idx.n_subjects);
    if (inserted) {
      idx.original_id.push_back(id);
      ++idx.n_subjects;
    }
    idx.subject_of_row.push_back(it->second);
  }
  return idx;
}

}  // namespace gva
