#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalfair/errors.hpp"

namespace causalfair {

enum class ColumnKind { Continuous, Categorical };

std::string to_string(ColumnKind kind);

// Optional per-variable annotations carried alongside the data. Tiers
// feed background knowledge; roles and mediator kinds feed the fairness
// audit. Empty strings mean "unannotated".
struct VariableMeta {
  std::optional<int> tier;
  std::string role;           // "", "protected", "outcome"
  std::string mediator_kind;  // "", "redlining", "explaining"
};

// One variable. Continuous columns live in `numeric`; categorical
// columns live in `codes` with values in [0, levels). Exactly one of
// the two payloads is populated, selected by `kind`.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  std::vector<double> numeric;
  std::vector<int> codes;
  int levels = 0;

  static Column continuous(std::string name, std::vector<double> values);
  // levels < 0 means "infer as max code + 1".
  static Column categorical(std::string name, std::vector<int> codes,
                            int levels = -1);

  std::size_t size() const {
    return kind == ColumnKind::Continuous ? numeric.size() : codes.size();
  }
};

// Immutable rectangular sample. Construction validates shape: equal
// column lengths, at least one row, unique names, finite continuous
// values, categorical codes in range with at least two levels.
class Dataset {
 public:
  explicit Dataset(std::vector<Column> columns);

  int n() const { return n_; }
  int num_vars() const { return static_cast<int>(columns_.size()); }

  int index_of(const std::string& name) const;  // throws on unknown name
  const Column& column(int i) const;
  const std::string& name(int i) const { return column(i).name; }
  std::vector<std::string> names() const;

  bool is_continuous(int i) const {
    return column(i).kind == ColumnKind::Continuous;
  }
  bool is_categorical(int i) const {
    return column(i).kind == ColumnKind::Categorical;
  }
  bool all_continuous() const;
  bool all_categorical() const;

  // Payload accessors; throw InvalidArgumentError on a kind mismatch.
  const std::vector<double>& cont(int i) const;
  const std::vector<int>& codes(int i) const;
  int levels(int i) const;

  const VariableMeta& meta(int i) const;
  void set_meta(int i, VariableMeta m);

 private:
  void check_index(int i) const;

  std::vector<Column> columns_;
  std::vector<VariableMeta> meta_;
  int n_ = 0;
};

}  // namespace causalfair
