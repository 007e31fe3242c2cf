#include "causalfair/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "causalfair/errors.hpp"

namespace causalfair {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgumentError(std::string("cannot open ") + what + " '" +
                               path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

const char* mark_name(EdgeMark m) {
  switch (m) {
    case EdgeMark::Tail:
      return "tail";
    case EdgeMark::Arrow:
      return "arrow";
    default:
      return "circle";
  }
}

EdgeMark mark_from_name(const std::string& s) {
  if (s == "tail") return EdgeMark::Tail;
  if (s == "arrow") return EdgeMark::Arrow;
  if (s == "circle") return EdgeMark::Circle;
  throw SchemaMismatchError("unknown endpoint mark '" + s +
                            "'; expected tail, arrow or circle");
}

const char* arrow_shape(EdgeMark m) {
  switch (m) {
    case EdgeMark::Tail:
      return "none";
    case EdgeMark::Arrow:
      return "normal";
    default:
      return "odot";
  }
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw SchemaMismatchError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw SchemaMismatchError(std::string("'") + key + "' in " + where +
                              " must be a string");
  }
  std::string v = obj[key].get<std::string>();
  if (v.empty()) {
    throw SchemaMismatchError(std::string("'") + key + "' in " + where +
                              " is empty");
  }
  return v;
}

}  // namespace

int Schema::sensitive_index() const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].role == "sensitive") return static_cast<int>(i);
  }
  return -1;
}

int Schema::outcome_index() const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].role == "outcome") return static_cast<int>(i);
  }
  return -1;
}

Schema parse_schema(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaMismatchError(std::string("schema is not valid JSON: ") +
                              e.what());
  }
  if (!j.is_object()) throw SchemaMismatchError("schema root must be an object");
  check_keys(j, {"variables", "positive_outcome", "privileged", "protected"},
             "the schema root");
  if (!j.contains("variables") || !j["variables"].is_array() ||
      j["variables"].empty()) {
    throw SchemaMismatchError(
        "schema needs a non-empty 'variables' array");
  }

  Schema s;
  s.positive_outcome = require_string(j, "positive_outcome", "the schema root");
  s.privileged = require_string(j, "privileged", "the schema root");
  s.protected_group = require_string(j, "protected", "the schema root");
  if (s.privileged == s.protected_group) {
    throw SchemaMismatchError(
        "privileged and protected labels are both '" + s.privileged + "'");
  }

  std::set<std::string> seen;
  int n_tiers = 0;
  for (const auto& entry : j["variables"]) {
    if (!entry.is_object()) {
      throw SchemaMismatchError("every schema variable must be an object");
    }
    SchemaVariable v;
    v.name = require_string(entry, "name", "a schema variable");
    const std::string where = "variable '" + v.name + "'";
    check_keys(entry, {"name", "kind", "tier", "role", "mediator_kind"},
               where);
    if (!seen.insert(v.name).second) {
      throw SchemaMismatchError("duplicate " + where + " in schema");
    }

    std::string kind = require_string(entry, "kind", where);
    if (kind == "continuous") {
      v.kind = ColumnKind::Continuous;
    } else if (kind == "categorical") {
      v.kind = ColumnKind::Categorical;
    } else {
      throw SchemaMismatchError("kind of " + where + " is '" + kind +
                                "'; expected continuous or categorical");
    }

    if (entry.contains("tier")) {
      if (!entry["tier"].is_number_integer()) {
        throw SchemaMismatchError("tier of " + where + " must be an integer");
      }
      v.tier = entry["tier"].get<int>();
      ++n_tiers;
    }
    if (entry.contains("role")) {
      v.role = require_string(entry, "role", where);
      if (v.role != "sensitive" && v.role != "outcome" &&
          v.role != "covariate") {
        throw SchemaMismatchError("role of " + where + " is '" + v.role +
                                  "'; expected sensitive, outcome or covariate");
      }
    }
    if (entry.contains("mediator_kind")) {
      v.mediator_kind = require_string(entry, "mediator_kind", where);
      if (v.mediator_kind != "none" && v.mediator_kind != "redlining" &&
          v.mediator_kind != "explaining") {
        throw SchemaMismatchError(
            "mediator_kind of " + where + " is '" + v.mediator_kind +
            "'; expected none, redlining or explaining");
      }
      if (v.mediator_kind != "none" && v.role != "covariate") {
        throw SchemaMismatchError("mediator_kind does not apply to " + where +
                                  "; only covariates can mediate");
      }
    }
    s.variables.push_back(std::move(v));
  }

  int n_sensitive = 0;
  int n_outcome = 0;
  for (const auto& v : s.variables) {
    n_sensitive += v.role == "sensitive";
    n_outcome += v.role == "outcome";
  }
  if (n_sensitive != 1) {
    throw SchemaMismatchError("schema needs exactly one sensitive variable, has " +
                              std::to_string(n_sensitive));
  }
  if (n_outcome != 1) {
    throw SchemaMismatchError("schema needs exactly one outcome variable, has " +
                              std::to_string(n_outcome));
  }
  if (n_tiers != 0 && n_tiers != static_cast<int>(s.variables.size())) {
    throw SchemaMismatchError(
        "tiers must cover every variable or none; " +
        std::to_string(n_tiers) + " of " +
        std::to_string(s.variables.size()) + " are set");
  }
  return s;
}

Schema load_schema(const std::string& path) {
  return parse_schema(read_file(path, "schema file"));
}

int TypedTable::code_of(int var, const std::string& label) const {
  if (var < 0 || var >= static_cast<int>(levels.size())) return -1;
  const auto& ls = levels[var];
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i] == label) return static_cast<int>(i);
  }
  return -1;
}

TypedTable load_dataset(const std::string& csv_path, const Schema& schema) {
  const std::string text = read_file(csv_path, "data file");
  const std::size_t n_cols = schema.variables.size();

  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  if (lines.empty()) {
    throw EmptyDatasetError("'" + csv_path + "' is empty");
  }

  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.size() > n_cols) {
    throw SchemaMismatchError("CSV column " + std::to_string(n_cols + 1) +
                              " '" + header[n_cols] +
                              "' is not in the schema");
  }
  if (header.size() < n_cols) {
    throw SchemaMismatchError("schema variable '" +
                              schema.variables[header.size()].name +
                              "' is missing from the CSV header");
  }
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (header[c] != schema.variables[c].name) {
      throw SchemaMismatchError("CSV column " + std::to_string(c + 1) +
                                " is '" + header[c] +
                                "' but the schema expects '" +
                                schema.variables[c].name + "'");
    }
  }

  std::vector<std::vector<double>> numeric(n_cols);
  std::vector<std::vector<int>> codes(n_cols);
  std::vector<std::vector<std::string>> level_labels(n_cols);
  std::vector<std::map<std::string, int>> level_index(n_cols);

  std::size_t n_rows = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::vector<std::string> fields = split_csv_line(lines[li]);
    const std::size_t row = li;  // 1-based data row
    if (fields.size() > n_cols) {
      throw SchemaMismatchError("row " + std::to_string(row) + " has " +
                                std::to_string(fields.size()) +
                                " fields; the schema lists " +
                                std::to_string(n_cols) + " columns");
    }
    if (fields.size() < n_cols) {
      throw MissingValueError("row " + std::to_string(row) + " ends after " +
                                  std::to_string(fields.size()) + " of " +
                                  std::to_string(n_cols) + " fields",
                              row, fields.size() + 1);
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      const SchemaVariable& var = schema.variables[c];
      const std::string& cell = fields[c];
      if (cell.empty()) {
        throw MissingValueError("row " + std::to_string(row) + ", column '" +
                                    var.name + "' is empty",
                                row, c + 1);
      }
      if (var.kind == ColumnKind::Continuous) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() + cell.size() || !std::isfinite(v)) {
          throw MissingValueError("row " + std::to_string(row) +
                                      ", column '" + var.name + "': '" +
                                      cell + "' is not a finite number",
                                  row, c + 1);
        }
        numeric[c].push_back(v);
      } else {
        auto [it, inserted] = level_index[c].try_emplace(
            cell, static_cast<int>(level_labels[c].size()));
        if (inserted) level_labels[c].push_back(cell);
        codes[c].push_back(it->second);
      }
    }
    ++n_rows;
  }
  if (n_rows == 0) {
    throw EmptyDatasetError("'" + csv_path + "' has a header but no data rows");
  }

  std::vector<Column> cols;
  cols.reserve(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    const SchemaVariable& var = schema.variables[c];
    if (var.kind == ColumnKind::Continuous) {
      cols.push_back(Column::continuous(var.name, std::move(numeric[c])));
    } else {
      if (level_labels[c].size() < 2) {
        throw SchemaMismatchError("categorical column '" + var.name +
                                  "' takes the single value '" +
                                  level_labels[c][0] +
                                  "'; at least two levels are needed");
      }
      cols.push_back(Column::categorical(
          var.name, std::move(codes[c]),
          static_cast<int>(level_labels[c].size())));
    }
  }

  TypedTable t{Dataset(std::move(cols)), std::move(level_labels)};
  for (std::size_t c = 0; c < n_cols; ++c) {
    const SchemaVariable& var = schema.variables[c];
    VariableMeta m;
    m.tier = var.tier;
    if (var.role == "sensitive") {
      m.role = "protected";
    } else if (var.role == "outcome") {
      m.role = "outcome";
    }
    if (var.mediator_kind != "none") m.mediator_kind = var.mediator_kind;
    t.data.set_meta(static_cast<int>(c), std::move(m));
  }
  return t;
}

TypedTable load_dataset(const std::string& csv_path,
                        const std::string& schema_path) {
  return load_dataset(csv_path, load_schema(schema_path));
}

TypedTable discretize(const TypedTable& table, int bins) {
  if (bins < 2) {
    throw InvalidArgumentError("discretize needs at least 2 bins, got " +
                               std::to_string(bins));
  }
  const Dataset& d = table.data;
  std::vector<Column> cols;
  std::vector<std::vector<std::string>> labels;
  cols.reserve(d.num_vars());
  labels.reserve(d.num_vars());

  for (int i = 0; i < d.num_vars(); ++i) {
    const std::string& name = d.name(i);
    if (d.is_categorical(i)) {
      cols.push_back(Column::categorical(name, d.codes(i), d.levels(i)));
      labels.push_back(table.levels[i]);
      continue;
    }
    const std::vector<double>& v = d.cont(i);
    const std::size_t n = v.size();
    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    for (int k = 1; k < bins; ++k) {
      cuts.push_back(sorted[(static_cast<std::size_t>(k) * n) / bins]);
    }
    std::vector<int> raw(n);
    std::set<int> observed;
    for (std::size_t r = 0; r < n; ++r) {
      raw[r] = static_cast<int>(
          std::upper_bound(cuts.begin(), cuts.end(), v[r]) - cuts.begin());
      observed.insert(raw[r]);
    }
    if (observed.size() < 2) {
      throw ZeroVarianceError("equal-frequency binning left column '" + name +
                              "' with a single bin; the column is constant");
    }
    std::map<int, int> dense;
    for (int code : observed) {
      dense.emplace(code, static_cast<int>(dense.size()));
    }
    for (std::size_t r = 0; r < n; ++r) raw[r] = dense.at(raw[r]);
    cols.push_back(Column::categorical(
        name, std::move(raw), static_cast<int>(observed.size())));
    std::vector<std::string> bin_labels;
    for (std::size_t b = 0; b < observed.size(); ++b) {
      bin_labels.push_back("b" + std::to_string(b));
    }
    labels.push_back(std::move(bin_labels));
  }

  TypedTable out{Dataset(std::move(cols)), std::move(labels)};
  for (int i = 0; i < d.num_vars(); ++i) {
    out.data.set_meta(i, d.meta(i));
  }
  return out;
}

std::string graph_to_json(const MixedGraph& g) {
  json j;
  j["nodes"] = g.names();
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    json je;
    je["u"] = g.names()[e.u];
    je["v"] = g.names()[e.v];
    je["mark_u"] = mark_name(e.mark_u);
    je["mark_v"] = mark_name(e.mark_v);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

MixedGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaMismatchError(std::string("graph file is not valid JSON: ") +
                              e.what());
  }
  if (j.is_object() && j.contains("graph")) j = j["graph"];
  if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array() ||
      !j.contains("edges") || !j["edges"].is_array()) {
    throw SchemaMismatchError(
        "graph JSON needs 'nodes' and 'edges' arrays");
  }
  std::vector<std::string> names;
  std::map<std::string, NodeId> index;
  for (const auto& n : j["nodes"]) {
    if (!n.is_string()) {
      throw SchemaMismatchError("graph node entries must be strings");
    }
    index.emplace(n.get<std::string>(), static_cast<NodeId>(names.size()));
    names.push_back(n.get<std::string>());
  }
  MixedGraph g(names);
  for (const auto& je : j["edges"]) {
    if (!je.is_object()) {
      throw SchemaMismatchError("graph edge entries must be objects");
    }
    const std::string u = require_string(je, "u", "a graph edge");
    const std::string v = require_string(je, "v", "a graph edge");
    auto iu = index.find(u);
    auto iv = index.find(v);
    if (iu == index.end() || iv == index.end()) {
      throw SchemaMismatchError("edge endpoint '" +
                                (iu == index.end() ? u : v) +
                                "' is not a node");
    }
    g.add_edge(iu->second, iv->second,
               mark_from_name(require_string(je, "mark_u", "a graph edge")),
               mark_from_name(require_string(je, "mark_v", "a graph edge")));
  }
  return g;
}

std::string sbcn_to_json(const SbcnGraph& g) {
  json j;
  json nodes = json::array();
  for (const BernoulliNode& n : g.nodes) {
    json jn;
    jn["variable"] = n.variable;
    jn["var_index"] = n.var_index;
    jn["value"] = n.value;
    nodes.push_back(std::move(jn));
  }
  j["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const SbcnEdge& e : g.edges) {
    json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je["weight"] = e.weight;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  j["trajectory"] = g.trajectory;
  return j.dump(2) + "\n";
}

SbcnGraph sbcn_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaMismatchError(std::string("network file is not valid JSON: ") +
                              e.what());
  }
  if (j.is_object() && j.contains("network")) j = j["network"];
  SbcnGraph g;
  try {
    for (const auto& jn : j.at("nodes")) {
      BernoulliNode n;
      n.variable = jn.at("variable").get<std::string>();
      n.var_index = jn.at("var_index").get<int>();
      n.value = jn.at("value").get<int>();
      g.nodes.push_back(std::move(n));
    }
    for (const auto& je : j.at("edges")) {
      SbcnEdge e;
      e.from = je.at("from").get<int>();
      e.to = je.at("to").get<int>();
      e.weight = je.at("weight").get<double>();
      g.edges.push_back(e);
    }
    if (j.contains("trajectory")) {
      g.trajectory = j["trajectory"].get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw SchemaMismatchError(std::string("malformed network JSON: ") +
                              e.what());
  }
  for (const SbcnEdge& e : g.edges) {
    const int n = static_cast<int>(g.nodes.size());
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw SchemaMismatchError("network edge endpoint out of range");
    }
  }
  return g;
}

std::string graph_to_dot(const MixedGraph& g) {
  std::ostringstream out;
  out << "digraph g {\n";
  const auto& names = g.names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << "  n" << i << " [label=\"" << dot_escape(names[i]) << "\"];\n";
  }
  for (const Edge& e : g.edges()) {
    out << "  n" << e.u << " -> n" << e.v << " [dir=both, arrowtail="
        << arrow_shape(e.mark_u) << ", arrowhead=" << arrow_shape(e.mark_v)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string sbcn_to_dot(const SbcnGraph& g) {
  std::ostringstream out;
  out << "digraph g {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out << "  n" << i << " [label=\"" << dot_escape(g.nodes[i].variable)
        << "=" << g.nodes[i].value << "\"];\n";
  }
  char w[32];
  for (const SbcnEdge& e : g.edges) {
    std::snprintf(w, sizeof w, "%.3f", e.weight);
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << w
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgumentError("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw InvalidArgumentError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw InvalidArgumentError("cannot move '" + tmp + "' to '" + path +
                               "': " + ec.message());
  }
}

void export_dot(const MixedGraph& g, const std::string& path) {
  write_file_atomic(path, graph_to_dot(g));
}

void export_dot(const SbcnGraph& g, const std::string& path) {
  write_file_atomic(path, sbcn_to_dot(g));
}

}  // namespace causalfair
