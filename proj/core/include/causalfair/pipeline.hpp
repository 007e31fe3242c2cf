#pragma once

#include <string>
#include <vector>

namespace causalfair {

// Everything one run needs. `algorithm` selects a single search or
// "all" for the full panel. `alpha` drives the conditional-independence
// tests of pc and fci; `lingam_threshold` prunes the weighted adjacency;
// `seed` fixes the sbcn hill climb and its random walks; `extension_cap`
// bounds the enumerated DAG class behind every fairness range;
// `walk_count` sizes the discrimination-score walk sample.
// `discretize_bins` > 0 bins every continuous column with equal
// frequencies, which is how mixed or continuous data reaches the
// categorical-only stages (sbcn and the fairness measures).
struct RunConfig {
  std::string algorithm = "all";
  double alpha = 0.05;
  double lingam_threshold = 0.05;
  unsigned long long seed = 0;
  std::size_t extension_cap = 4096;
  long long walk_count = 10000;
  int discretize_bins = 0;
  std::string data_path;
  std::string schema_path;
  std::string out_dir;
};

// Outcome of a run. On success `exit_code` is 0 and `files` lists every
// artifact in write order. On failure `exit_code` is nonzero,
// `error_json` holds {"error": {"code", "message"}}, and an error.json
// with the same content is left in the output directory when possible.
struct PipelineResult {
  int exit_code = 0;
  std::vector<std::string> files;
  std::string error_json;
};

// Load data and schema, check that every selected algorithm can run on
// the column families it will see (before any search starts), run the
// selection, and write per-algorithm artifacts: <algo>.graph.json,
// <algo>.dot, then a combined fairness_report.json and comparison.json.
// Structure searches run on the loaded columns (binned when the search
// needs categories); the fairness measures always evaluate on the
// categorical view, so runs on continuous data need discretize_bins.
// Outputs are deterministic: the same data, schema, config and seed
// produce byte-identical files.
PipelineResult run_pipeline(const RunConfig& cfg);

}  // namespace causalfair
