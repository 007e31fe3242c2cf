#include "causalfair/pipeline.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "causalfair/errors.hpp"
#include "causalfair/fairness.hpp"
#include "causalfair/fci.hpp"
#include "causalfair/ges.hpp"
#include "causalfair/io.hpp"
#include "causalfair/lingam.hpp"
#include "causalfair/pc.hpp"
#include "causalfair/sbcn.hpp"
#include "causalfair/stats.hpp"

namespace causalfair {

using nlohmann::json;

namespace {

// Toggle budget for the sbcn hill climb; the local-maximum sweep stops
// the search long before this on the dataset sizes a CLI run sees.
constexpr int kHillClimbIters = 50000;

const std::vector<std::string> kPanel{"pc", "fci", "ges", "lingam", "sbcn"};

void validate_config(const RunConfig& cfg) {
  static const std::set<std::string> known{"pc",     "fci",  "ges",
                                           "lingam", "sbcn", "all"};
  if (!known.count(cfg.algorithm)) {
    throw InvalidArgumentError("unknown algorithm '" + cfg.algorithm +
                               "'; expected pc, fci, ges, lingam, sbcn or all");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw InvalidArgumentError("alpha must lie strictly between 0 and 1");
  }
  if (cfg.lingam_threshold < 0.0) {
    throw InvalidArgumentError("threshold must be non-negative");
  }
  if (cfg.extension_cap == 0) {
    throw InvalidArgumentError("extension cap must be at least 1");
  }
  if (cfg.walk_count < 1) {
    throw InvalidArgumentError("walk count must be at least 1");
  }
  if (cfg.discretize_bins != 0 && cfg.discretize_bins < 2) {
    throw InvalidArgumentError(
        "discretize-bins must be 0 (off) or at least 2");
  }
  if (cfg.data_path.empty()) throw InvalidArgumentError("no data file given");
  if (cfg.schema_path.empty()) {
    throw InvalidArgumentError("no schema file given");
  }
  if (cfg.out_dir.empty()) {
    throw InvalidArgumentError("no output directory given");
  }
}

struct Prepared {
  const RunConfig* cfg = nullptr;
  const TypedTable* raw = nullptr;
  const TypedTable* cat = nullptr;  // categorical view; null when absent
  int a_var = -1;
  int y_var = -1;
  MeasureConfig mcfg;
  BackgroundKnowledge bk;
  std::vector<int> tiers;
};

// The table an algorithm actually consumes, or NotApplicable when the
// column families rule it out.
const TypedTable& view_for(const std::string& algo, const Prepared& p) {
  const Dataset& raw = p.raw->data;
  if (algo == "lingam") {
    if (!raw.all_continuous()) {
      throw NotApplicableError(
          "lingam models linear effects among continuous variables; this "
          "dataset has categorical columns");
    }
    return *p.raw;
  }
  if (algo == "sbcn") {
    if (!p.cat) {
      throw NotApplicableError(
          "sbcn works on categorical data; rerun with --discretize-bins to "
          "bin the continuous columns first");
    }
    return *p.cat;
  }
  if (raw.all_continuous() || raw.all_categorical()) return *p.raw;
  if (p.cat) return *p.cat;
  throw NotApplicableError(
      algo +
      " handles one column family at a time; this dataset mixes "
      "continuous and categorical columns, so rerun with --discretize-bins");
}

int resolve_label(const TypedTable& t, int var, const std::string& label,
                  const std::string& what, bool is_group) {
  const int code = t.code_of(var, label);
  if (code >= 0) return code;
  std::string msg = what + " label '" + label + "' never occurs in column '" +
                    t.data.name(var) + "' (levels:";
  for (const std::string& l : t.levels[var]) msg += " " + l;
  msg += ")";
  if (is_group) throw EmptyGroupError(msg);
  throw InvalidArgumentError(msg);
}

json walk_table(const SbcnGraph& net, const TypedTable& view,
                const Prepared& p) {
  json out;
  json entries = json::array();
  std::vector<int> outcome_vertices;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (net.nodes[i].var_index == p.y_var) {
      outcome_vertices.push_back(static_cast<int>(i));
    }
  }
  const int plus =
      find_node(net.nodes, view.data.name(p.y_var), p.mcfg.y_plus);
  if (outcome_vertices.size() != 2 || plus < 0) {
    out["note"] =
        "walk scores need both levels of a binary outcome in the vertex set";
    out["scores"] = std::move(entries);
    return out;
  }
  const int minus = outcome_vertices[0] == plus ? outcome_vertices[1]
                                                : outcome_vertices[0];
  WalkConfig wc;
  wc.n_walks = p.cfg->walk_count;
  wc.rng_seed = p.cfg->seed;
  wc.delta_plus = plus;
  wc.delta_minus = minus;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const BernoulliNode& n = net.nodes[i];
    if (n.var_index != p.a_var) continue;
    const WalkScore s = random_walk_score(net, static_cast<int>(i), wc);
    json e;
    e["start"] = n.variable + "=" + std::to_string(n.value);
    e["start_label"] = view.levels[p.a_var][n.value];
    e["ds_minus"] = s.ds_minus;
    e["ds_plus"] = s.ds_plus;
    e["unresolved"] = s.unresolved;
    e["walks_minus"] = s.walks_minus;
    e["walks_plus"] = s.walks_plus;
    e["walks_unresolved"] = s.walks_unresolved;
    e["unreachable"] = s.unreachable;
    e["flags"] = s.flags;
    entries.push_back(std::move(e));
  }
  out["scores"] = std::move(entries);
  return out;
}

json report_to_json(const FairnessReport& rep) {
  json j;
  j["n_dags"] = rep.n_dags;
  json values = json::array();
  for (const MeasureValue& v : rep.values) {
    json jv;
    jv["measure"] = to_string(v.measure);
    jv["dag"] = v.dag;
    jv["identifiable"] = v.identifiable;
    if (v.identifiable) {
      jv["value"] = v.value;
    } else {
      jv["value"] = nullptr;
    }
    jv["flags"] = v.flags;
    values.push_back(std::move(jv));
  }
  j["values"] = std::move(values);
  json ranges = json::object();
  for (const auto& [m, r] : rep.ranges) {
    json jr;
    jr["min"] = r.min_value;
    jr["max"] = r.max_value;
    jr["min_dag"] = r.min_dag;
    jr["max_dag"] = r.max_dag;
    ranges[to_string(m)] = std::move(jr);
  }
  j["ranges"] = std::move(ranges);
  json verdicts = json::object();
  for (const auto& [m, v] : rep.verdicts) verdicts[to_string(m)] = v;
  j["verdicts"] = std::move(verdicts);
  j["flags"] = rep.flags;
  return j;
}

struct AlgoOutput {
  json artifact;
  std::string dot;
  FairnessReport report;
};

AlgoOutput run_algorithm(const std::string& algo, const Prepared& p) {
  const TypedTable& view = view_for(algo, p);
  const Dataset& d = view.data;
  json art;
  art["algorithm"] = algo;
  std::optional<MixedGraph> class_graph;
  std::string dot;

  if (algo == "pc" || algo == "fci") {
    const TestConfig tc{d.all_continuous() ? CiTestKind::FisherZ
                                           : CiTestKind::GSquared,
                        p.cfg->alpha};
    art["ci_test"] = to_string(tc.kind);
    art["alpha"] = tc.alpha;
    if (algo == "pc") {
      PcResult r = run_pc(d, tc, p.bk);
      art["tests_performed"] = r.tests_performed;
      art["max_depth_reached"] = r.max_depth_reached;
      art["warnings"] = r.warnings;
      class_graph = std::move(r.cpdag);
    } else {
      PagResult r = run_fci(d, tc, p.bk);
      art["tests_performed"] = r.tests_performed;
      art["max_depth_reached"] = r.max_depth_reached;
      art["warnings"] = r.warnings;
      json ys = json::array();
      const auto names = r.pag.names();
      for (const YStructure& t : r.y_structures) {
        ys.push_back(json::array(
            {names[t.c1], names[t.c2], names[t.x], names[t.y]}));
      }
      art["y_structures"] = std::move(ys);
      class_graph = std::move(r.pag);
    }
  } else if (algo == "ges") {
    GesState st = run_ges(d, p.bk);
    art["score"] = st.score;
    art["accepted_steps"] = st.steps.size();
    class_graph = std::move(st.cpdag);
  } else if (algo == "lingam") {
    LingamResult r = run_direct_lingam(d, p.bk, p.cfg->lingam_threshold);
    json order = json::array();
    for (int v : r.order.order) order.push_back(d.name(v));
    art["order"] = std::move(order);
    art["threshold"] = p.cfg->lingam_threshold;
    art["weights"] = r.weights.b;
    class_graph = std::move(r.graph);
  } else {
    const SbcnCandidates cand = suppes_filter(d, p.tiers);
    const SbcnGraph net =
        sbcn_hill_climb(d, cand, kHillClimbIters, p.cfg->seed);
    CollapseResult col = sbcn_as_causal_graph(net, d.names());
    art["network"] = json::parse(sbcn_to_json(net));
    art["candidate_flags"] = cand.flags;
    art["collapse_flags"] = col.flags;
    art["walks"] = walk_table(net, view, p);
    dot = sbcn_to_dot(net);
    class_graph = std::move(col.graph);
  }

  art["graph"] = json::parse(graph_to_json(*class_graph));
  if (dot.empty()) dot = graph_to_dot(*class_graph);

  std::vector<VariableMeta> metas;
  const Dataset& cat = p.cat->data;
  metas.reserve(cat.num_vars());
  for (int i = 0; i < cat.num_vars(); ++i) metas.push_back(cat.meta(i));
  FairnessReport rep =
      measure_range(*class_graph, cat, p.a_var, p.y_var, metas, p.mcfg);
  return {std::move(art), std::move(dot), std::move(rep)};
}

void run_impl(const RunConfig& cfg, PipelineResult& res) {
  validate_config(cfg);
  {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) {
      throw InvalidArgumentError("cannot create output directory '" +
                                 cfg.out_dir + "': " + ec.message());
    }
  }

  const Schema schema = load_schema(cfg.schema_path);
  const TypedTable raw = load_dataset(cfg.data_path, schema);

  std::optional<TypedTable> binned;
  Prepared p;
  p.cfg = &cfg;
  p.raw = &raw;
  if (raw.data.all_categorical()) {
    p.cat = &raw;
  } else if (cfg.discretize_bins > 0) {
    binned = discretize(raw, cfg.discretize_bins);
    p.cat = &*binned;
  }

  const std::vector<std::string> selected =
      cfg.algorithm == "all" ? kPanel : std::vector<std::string>{cfg.algorithm};

  // Every gate fires before the first search starts, so a run never
  // leaves partial artifacts behind just to fail on a later stage's
  // column-family requirements.
  for (const std::string& algo : selected) view_for(algo, p);
  if (!p.cat) {
    throw NotApplicableError(
        "the fairness measures stratify on categorical levels; rerun with "
        "--discretize-bins to bin the continuous columns");
  }

  p.a_var = schema.sensitive_index();
  p.y_var = schema.outcome_index();
  p.mcfg.a1 = resolve_label(*p.cat, p.a_var, schema.privileged, "privileged",
                            true);
  p.mcfg.a0 = resolve_label(*p.cat, p.a_var, schema.protected_group,
                            "protected", true);
  p.mcfg.y_plus = resolve_label(*p.cat, p.y_var, schema.positive_outcome,
                                "positive outcome", false);
  p.mcfg.extension_cap = cfg.extension_cap;

  p.tiers.assign(raw.data.num_vars(), 0);
  for (int i = 0; i < raw.data.num_vars(); ++i) {
    if (const auto& t = raw.data.meta(i).tier) {
      p.tiers[i] = *t;
      p.bk.set_tier(i, *t);
    }
  }
  p.bk.validate(raw.data.num_vars());

  const std::filesystem::path out(cfg.out_dir);
  json reports;
  std::vector<std::pair<std::string, FairnessReport>> panel;
  for (const std::string& algo : selected) {
    AlgoOutput o = run_algorithm(algo, p);
    const std::string graph_path = (out / (algo + ".graph.json")).string();
    const std::string dot_path = (out / (algo + ".dot")).string();
    write_file_atomic(graph_path, o.artifact.dump(2) + "\n");
    res.files.push_back(graph_path);
    write_file_atomic(dot_path, o.dot);
    res.files.push_back(dot_path);
    reports[algo] = report_to_json(o.report);
    panel.emplace_back(algo, std::move(o.report));
  }

  const std::string report_path = (out / "fairness_report.json").string();
  write_file_atomic(report_path, reports.dump(2) + "\n");
  res.files.push_back(report_path);

  json cmp;
  cmp["algorithms"] = selected;
  json measures = json::object();
  for (Measure m : {Measure::TV, Measure::TE, Measure::AteIpw, Measure::DE,
                    Measure::ID, Measure::ED}) {
    json row = json::object();
    for (const auto& [algo, rep] : panel) {
      json cell;
      cell["verdict"] = rep.verdicts.at(m);
      const auto it = rep.ranges.find(m);
      if (it != rep.ranges.end()) {
        cell["min"] = it->second.min_value;
        cell["max"] = it->second.max_value;
      }
      row[algo] = std::move(cell);
    }
    measures[to_string(m)] = std::move(row);
  }
  cmp["measures"] = std::move(measures);
  const std::string cmp_path = (out / "comparison.json").string();
  write_file_atomic(cmp_path, cmp.dump(2) + "\n");
  res.files.push_back(cmp_path);
}

void emit_error(const RunConfig& cfg, PipelineResult& res,
                const std::string& code, const std::string& message) {
  json err;
  err["error"]["code"] = code;
  err["error"]["message"] = message;
  res.error_json = err.dump(2) + "\n";
  if (cfg.out_dir.empty()) return;
  try {
    const std::string path =
        (std::filesystem::path(cfg.out_dir) / "error.json").string();
    write_file_atomic(path, res.error_json);
    res.files.push_back(path);
  } catch (...) {
    // The caller still gets the error through the result; a missing
    // error.json only loses the on-disk copy.
  }
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
  PipelineResult res;
  try {
    run_impl(cfg, res);
  } catch (const Error& e) {
    res.exit_code = 1;
    emit_error(cfg, res, e.code(), e.what());
  } catch (const std::exception& e) {
    res.exit_code = 2;
    emit_error(cfg, res, "internal", e.what());
  }
  return res;
}

}  // namespace causalfair
