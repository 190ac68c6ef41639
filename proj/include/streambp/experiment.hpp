#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "streambp/algorithm.hpp"
#include "streambp/kernel.hpp"
#include "streambp/types.hpp"

namespace streambp {

enum class Mode { kGenerate, kRun, kSweep, kEstimateParams, kTrace };

Mode parse_mode(const std::string& text);
std::string to_string(Mode mode);

struct ExperimentConfig {
  Mode mode = Mode::kRun;

  // Synthetic symmetric model. Ignored when a dataset or instance is given.
  VertexId n = 10000;
  int k = 2;
  double a = 5.0;
  double b = 0.5;
  // When nonempty, each lambda yields (a, b) with a + (k - 1) b held at
  // total_intensity (default: the configured a + (k - 1) b).
  std::vector<double> lambdas;
  std::optional<double> total_intensity;

  // Real dataset: edge list + label file. Intensities are estimated from the
  // ground truth and scaled by (1 + ab_perturb).
  std::string dataset_edges;
  std::string dataset_labels;
  std::string dataset_name;
  double ab_perturb = 0.0;

  // Directory written by `generate` (reused as-is; trials vary nothing but
  // the trial index).
  std::string instance_dir;

  std::vector<double> alphas{0.3};
  std::vector<std::string> algorithms{"streambp"};
  std::vector<int> radii{3};
  double eps = 1e-6;
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<Step> checkpoints;
  // CSV destination ("-" or empty for stdout); output directory for generate.
  std::string output;
  // 0: $STREAMBP_THREADS, else hardware concurrency.
  int threads = 0;
  // Off: runtime_ms is written as 0 so reruns are byte-identical.
  bool record_timing = true;
  double summary_noise = 0.05;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Overlays keys of a JSON object (same names as the CLI flags) onto `config`.
void apply_json_config(ExperimentConfig& config, const std::string& json_text);
ExperimentConfig load_json_config(const std::filesystem::path& path);

// Known names: streambp, streambp-star, offline-bp, vote1x, vote2x, vote3x,
// summary:<spec>.
bool algorithm_uses_radius(const std::string& name);
std::unique_ptr<StreamingAlgorithm> make_algorithm(const std::string& name, VertexId capacity,
                                                   const KernelParams& params, int radius,
                                                   std::uint64_t seed, double summary_noise = 0.05);

struct ResultRow {
  std::string model_id;
  std::string algorithm;
  VertexId n = 0;
  int k = 0;
  double a = 0.0;
  double b = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  int radius = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  int trial = 0;
  double accuracy = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t messages_touched = 0;
  // Trace rows only.
  Step t = 0;
};

// run / sweep: one row per (trial, lambda, alpha, algorithm, radius), with
// radius-free algorithms emitted once per (trial, lambda, alpha).
// trace: one row per checkpoint of each such combination.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void write_result_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_trace_csv(std::ostream& os, const std::vector<ResultRow>& rows);

// estimate-params: "dataset,vertices,edges,k,a,b".
void write_parameter_estimates(std::ostream& os, const ExperimentConfig& config);

// generate: one instance directory per trial under config.output.
void generate_instances(const ExperimentConfig& config);

// Dispatches on config.mode and writes to config.output.
void execute(const ExperimentConfig& config);

}  // namespace streambp
