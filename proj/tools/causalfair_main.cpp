#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "causalfair/pipeline.hpp"

int main(int argc, char** argv) {
  causalfair::RunConfig cfg;
  CLI::App app{
      "Learn causal structure from a CSV and audit the fairness of the "
      "sensitive-to-outcome pathways across every DAG consistent with it."};
  app.add_option("--algorithm", cfg.algorithm,
                 "pc, fci, ges, lingam, sbcn or all")
      ->capture_default_str();
  app.add_option("--alpha", cfg.alpha,
                 "significance level for the pc/fci independence tests")
      ->capture_default_str();
  app.add_option("--threshold", cfg.lingam_threshold,
                 "absolute pruning threshold for lingam edge weights")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for the sbcn search and walks")
      ->capture_default_str();
  app.add_option("--extension-cap", cfg.extension_cap,
                 "largest DAG class the fairness ranges will enumerate")
      ->capture_default_str();
  app.add_option("--walks", cfg.walk_count,
                 "random walks behind each discrimination score")
      ->capture_default_str();
  app.add_option("--discretize-bins", cfg.discretize_bins,
                 "bin continuous columns into this many equal-frequency "
                 "categories (0 keeps them continuous)")
      ->capture_default_str();
  app.add_option("--data", cfg.data_path, "CSV data file")->required();
  app.add_option("--schema", cfg.schema_path, "JSON schema file")->required();
  app.add_option("--out-dir", cfg.out_dir, "directory for the artifacts")
      ->required();
  CLI11_PARSE(app, argc, argv);

  const causalfair::PipelineResult res = causalfair::run_pipeline(cfg);
  if (res.exit_code == 0) {
    for (const std::string& f : res.files) {
      std::cout << "wrote " << f << "\n";
    }
  } else {
    std::cerr << res.error_json;
  }
  return res.exit_code;
}
