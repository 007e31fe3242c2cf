#include "causalfair/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace causalfair {

std::string to_string(ColumnKind kind) {
  return kind == ColumnKind::Continuous ? "continuous" : "categorical";
}

Column Column::continuous(std::string name, std::vector<double> values) {
  Column c;
  c.name = std::move(name);
  c.kind = ColumnKind::Continuous;
  c.numeric = std::move(values);
  return c;
}

Column Column::categorical(std::string name, std::vector<int> codes,
                           int levels) {
  Column c;
  c.name = std::move(name);
  c.kind = ColumnKind::Categorical;
  c.codes = std::move(codes);
  if (levels < 0) {
    int max_code = -1;
    for (int v : c.codes) max_code = std::max(max_code, v);
    levels = max_code + 1;
  }
  c.levels = levels;
  return c;
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw EmptyDatasetError("dataset has no columns");
  n_ = static_cast<int>(columns_[0].size());
  if (n_ == 0) throw EmptyDatasetError("dataset has no rows");

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const Column& c = columns_[i];
    if (c.name.empty())
      throw InvalidArgumentError("column " + std::to_string(i) + " is unnamed");
    if (!seen.insert(c.name).second)
      throw InvalidArgumentError("duplicate column name '" + c.name + "'");
    if (static_cast<int>(c.size()) != n_)
      throw InvalidArgumentError("column '" + c.name + "' has " +
                                 std::to_string(c.size()) + " rows, expected " +
                                 std::to_string(n_));
    if (c.kind == ColumnKind::Continuous) {
      for (std::size_t r = 0; r < c.numeric.size(); ++r) {
        double v = c.numeric[r];
        if (std::isnan(v)) throw MissingValueError("missing value in column '" + c.name + "'", r, i);
        if (!std::isfinite(v))
          throw InvalidArgumentError("non-finite value in column '" + c.name +
                                     "' at row " + std::to_string(r));
      }
    } else {
      if (c.levels < 2)
        throw InvalidArgumentError("categorical column '" + c.name +
                                   "' needs at least 2 levels, has " +
                                   std::to_string(c.levels));
      for (std::size_t r = 0; r < c.codes.size(); ++r) {
        int v = c.codes[r];
        if (v < 0 || v >= c.levels)
          throw InvalidArgumentError(
              "code " + std::to_string(v) + " out of range [0, " +
              std::to_string(c.levels) + ") in column '" + c.name +
              "' at row " + std::to_string(r));
      }
    }
  }
  meta_.resize(columns_.size());
}

int Dataset::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return static_cast<int>(i);
  throw InvalidArgumentError("unknown column '" + name + "'");
}

void Dataset::check_index(int i) const {
  if (i < 0 || i >= num_vars())
    throw InvalidArgumentError("column index " + std::to_string(i) +
                               " out of range");
}

const Column& Dataset::column(int i) const {
  check_index(i);
  return columns_[static_cast<std::size_t>(i)];
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const Column& c : columns_) out.push_back(c.name);
  return out;
}

bool Dataset::all_continuous() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const Column& c) {
    return c.kind == ColumnKind::Continuous;
  });
}

bool Dataset::all_categorical() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const Column& c) {
    return c.kind == ColumnKind::Categorical;
  });
}

const std::vector<double>& Dataset::cont(int i) const {
  const Column& c = column(i);
  if (c.kind != ColumnKind::Continuous)
    throw InvalidArgumentError("column '" + c.name + "' is not continuous");
  return c.numeric;
}

const std::vector<int>& Dataset::codes(int i) const {
  const Column& c = column(i);
  if (c.kind != ColumnKind::Categorical)
    throw InvalidArgumentError("column '" + c.name + "' is not categorical");
  return c.codes;
}

int Dataset::levels(int i) const {
  const Column& c = column(i);
  if (c.kind != ColumnKind::Categorical)
    throw InvalidArgumentError("column '" + c.name + "' is not categorical");
  return c.levels;
}

const VariableMeta& Dataset::meta(int i) const {
  check_index(i);
  return meta_[static_cast<std::size_t>(i)];
}

void Dataset::set_meta(int i, VariableMeta m) {
  check_index(i);
  meta_[static_cast<std::size_t>(i)] = std::move(m);
}

}  // namespace causalfair
