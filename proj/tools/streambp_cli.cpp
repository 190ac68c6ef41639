// Command-line driver for synthetic and dataset experiments.
#include <iostream>

#include <CLI11.hpp>

#include "streambp/error.hpp"
#include "streambp/experiment.hpp"

int main(int argc, char** argv) {
  using streambp::ExperimentConfig;

  CLI::App app{"Streaming belief propagation experiments"};
  app.option_defaults()->always_capture_default();

  ExperimentConfig cli;
  std::string mode = "run";
  std::string config_path;
  bool no_timing = false;

  app.add_option("--config", config_path, "JSON config; explicit flags override it")
      ->check(CLI::ExistingFile);
  auto* mode_opt = app.add_option("--mode", mode, "generate | run | sweep | estimate-params | trace");
  auto* n_opt = app.add_option("--n", cli.n, "number of vertices");
  auto* k_opt = app.add_option("--k", cli.k, "number of communities");
  auto* a_opt = app.add_option("--a", cli.a, "intra-community intensity");
  auto* b_opt = app.add_option("--b", cli.b, "inter-community intensity");
  auto* lambda_opt = app.add_option("--lambda", cli.lambdas, "SNR values (replace a, b)")
                         ->delimiter(',');
  std::optional<double> total;
  auto* total_opt =
      app.add_option("--total-intensity", total, "a + (k-1) b held fixed across --lambda");
  auto* edges_opt = app.add_option("--dataset-edges", cli.dataset_edges, "edge list file");
  auto* labels_opt = app.add_option("--dataset-labels", cli.dataset_labels, "vertex label file");
  auto* name_opt = app.add_option("--dataset-name", cli.dataset_name, "name in the output");
  auto* perturb_opt =
      app.add_option("--ab-perturb", cli.ab_perturb, "relative error applied to estimated a, b");
  auto* instance_opt = app.add_option("--instance", cli.instance_dir, "instance directory")
                           ->check(CLI::ExistingDirectory);
  auto* alpha_opt = app.add_option("--alpha", cli.alphas, "side-information noise levels")
                        ->delimiter(',');
  auto* algo_opt = app.add_option("--algorithms", cli.algorithms,
                                  "streambp, streambp-star, offline-bp, vote1x..3x, "
                                  "summary:neighbor-mean")
                       ->delimiter(',');
  auto* radius_opt = app.add_option("--radius", cli.radii, "neighborhood radii")->delimiter(',');
  auto* eps_opt = app.add_option("--eps", cli.eps, "belief clamp");
  auto* trials_opt = app.add_option("--trials", cli.trials, "independent trials");
  auto* seed_opt = app.add_option("--seed", cli.seed, "master seed");
  auto* check_opt = app.add_option("--checkpoints", cli.checkpoints, "trace steps")->delimiter(',');
  auto* output_opt = app.add_option("--output", cli.output, "CSV path or generate directory");
  auto* threads_opt = app.add_option("--threads", cli.threads, "worker threads (0: auto)");
  auto* timing_opt = app.add_flag("--no-timing", no_timing, "write runtime_ms as 0");
  auto* noise_opt = app.add_option("--summary-noise", cli.summary_noise, "summary estimator noise");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config;
    if (!config_path.empty()) config = streambp::load_json_config(config_path);
    if (mode_opt->count()) config.mode = streambp::parse_mode(mode);
    if (n_opt->count()) config.n = cli.n;
    if (k_opt->count()) config.k = cli.k;
    if (a_opt->count()) config.a = cli.a;
    if (b_opt->count()) config.b = cli.b;
    if (lambda_opt->count()) config.lambdas = cli.lambdas;
    if (total_opt->count()) config.total_intensity = total;
    if (edges_opt->count()) config.dataset_edges = cli.dataset_edges;
    if (labels_opt->count()) config.dataset_labels = cli.dataset_labels;
    if (name_opt->count()) config.dataset_name = cli.dataset_name;
    if (perturb_opt->count()) config.ab_perturb = cli.ab_perturb;
    if (instance_opt->count()) config.instance_dir = cli.instance_dir;
    if (alpha_opt->count()) config.alphas = cli.alphas;
    if (algo_opt->count()) config.algorithms = cli.algorithms;
    if (radius_opt->count()) config.radii = cli.radii;
    if (eps_opt->count()) config.eps = cli.eps;
    if (trials_opt->count()) config.trials = cli.trials;
    if (seed_opt->count()) config.seed = cli.seed;
    if (check_opt->count()) config.checkpoints = cli.checkpoints;
    if (output_opt->count()) config.output = cli.output;
    if (threads_opt->count()) config.threads = cli.threads;
    if (timing_opt->count()) config.record_timing = !no_timing;
    if (noise_opt->count()) config.summary_noise = cli.summary_noise;
    streambp::execute(config);
  } catch (const streambp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
