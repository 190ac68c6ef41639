#include "streambp/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "streambp/datasets.hpp"
#include "streambp/error.hpp"
#include "streambp/evaluation.hpp"
#include "streambp/model.hpp"
#include "streambp/offline_bp.hpp"
#include "streambp/online_bp.hpp"
#include "streambp/summary.hpp"
#include "streambp/voting.hpp"

namespace streambp {

Mode parse_mode(const std::string& text) {
  if (text == "generate") return Mode::kGenerate;
  if (text == "run") return Mode::kRun;
  if (text == "sweep") return Mode::kSweep;
  if (text == "estimate-params") return Mode::kEstimateParams;
  if (text == "trace") return Mode::kTrace;
  throw ConfigError("mode: unknown value '" + text +
                    "' (expected generate, run, sweep, estimate-params, trace)");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kGenerate: return "generate";
    case Mode::kRun: return "run";
    case Mode::kSweep: return "sweep";
    case Mode::kEstimateParams: return "estimate-params";
    case Mode::kTrace: return "trace";
  }
  return "run";
}

bool algorithm_uses_radius(const std::string& name) {
  return name == "streambp" || name == "streambp-star" || name == "offline-bp";
}

std::unique_ptr<StreamingAlgorithm> make_algorithm(const std::string& name, VertexId capacity,
                                                   const KernelParams& params, int radius,
                                                   std::uint64_t seed, double summary_noise) {
  if (name == "streambp") return std::make_unique<StreamBp>(capacity, params, radius);
  if (name == "streambp-star") return std::make_unique<StreamBpStar>(capacity, params, radius);
  if (name == "offline-bp") return std::make_unique<OfflineBp>(capacity, params, radius);
  if (name == "vote1x") return std::make_unique<Voting>(capacity, params.k, 1);
  if (name == "vote2x") return std::make_unique<Voting>(capacity, params.k, 2);
  if (name == "vote3x") return std::make_unique<Voting>(capacity, params.k, 3);
  if (name.rfind("summary:", 0) == 0) {
    return std::make_unique<SummaryAlgorithm>(
        capacity, summary_spec_by_name(name.substr(8), params.k, summary_noise), seed);
  }
  throw ConfigError("algorithms: unknown algorithm '" + name + "'");
}

void ExperimentConfig::validate() const {
  const bool dataset = !dataset_edges.empty() || !dataset_labels.empty();
  if (dataset && (dataset_edges.empty() || dataset_labels.empty())) {
    throw ConfigError("dataset-edges/dataset-labels: both files are required");
  }
  if (dataset && !instance_dir.empty()) {
    throw ConfigError("instance: cannot be combined with dataset-edges");
  }
  if (mode == Mode::kEstimateParams && !dataset) {
    throw ConfigError("dataset-edges: estimate-params needs a dataset");
  }
  if (mode == Mode::kGenerate && (dataset || !instance_dir.empty())) {
    throw ConfigError("mode: generate only samples synthetic instances");
  }
  if ((mode == Mode::kGenerate) && output.empty()) {
    throw ConfigError("output: generate needs an output directory");
  }
  if (trials < 1) throw ConfigError("trials: must be at least 1");
  if (!dataset && instance_dir.empty()) {
    if (n < 1) throw ConfigError("n: must be positive");
    if (k < 1) throw ConfigError("k: must be positive");
    if (!(a >= 0.0) || !(b >= 0.0) || (a == 0.0 && b == 0.0)) {
      throw ConfigError("a/b: must be nonnegative and not both zero");
    }
  }
  if (!lambdas.empty() && (dataset || !instance_dir.empty())) {
    throw ConfigError("lambda: only applies to synthetic models");
  }
  if (alphas.empty()) throw ConfigError("alpha: at least one value required");
  if (algorithms.empty()) throw ConfigError("algorithms: at least one value required");
  if (radii.empty()) throw ConfigError("radius: at least one value required");
  for (int r : radii) {
    if (r < 1) throw ConfigError("radius: values must be at least 1");
  }
  for (const auto& name : algorithms) {
    if (!algorithm_uses_radius(name) && name != "vote1x" && name != "vote2x" && name != "vote3x" &&
        name.rfind("summary:", 0) != 0) {
      throw ConfigError("algorithms: unknown algorithm '" + name + "'");
    }
  }
  if (mode == Mode::kRun && (radii.size() > 1 || alphas.size() > 1 || lambdas.size() > 1)) {
    throw ConfigError("mode: run takes single radius/alpha/lambda values; use sweep");
  }
  if (!(eps >= 0.0)) throw ConfigError("eps: must be nonnegative");
  if (!(ab_perturb > -1.0)) throw ConfigError("ab-perturb: must exceed -1");
  if (!(summary_noise >= 0.0)) throw ConfigError("summary-noise: must be nonnegative");
  if (threads < 0) throw ConfigError("threads: must be nonnegative");
}

namespace {

template <typename T>
std::vector<T> scalar_or_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace

void apply_json_config(ExperimentConfig& config, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "mode") config.mode = parse_mode(value.get<std::string>());
      else if (key == "n") config.n = value.get<VertexId>();
      else if (key == "k") config.k = value.get<int>();
      else if (key == "a") config.a = value.get<double>();
      else if (key == "b") config.b = value.get<double>();
      else if (key == "lambda") config.lambdas = scalar_or_list<double>(value);
      else if (key == "total-intensity") config.total_intensity = value.get<double>();
      else if (key == "dataset-edges") config.dataset_edges = value.get<std::string>();
      else if (key == "dataset-labels") config.dataset_labels = value.get<std::string>();
      else if (key == "dataset-name") config.dataset_name = value.get<std::string>();
      else if (key == "ab-perturb") config.ab_perturb = value.get<double>();
      else if (key == "instance") config.instance_dir = value.get<std::string>();
      else if (key == "alpha") config.alphas = scalar_or_list<double>(value);
      else if (key == "algorithms") config.algorithms = scalar_or_list<std::string>(value);
      else if (key == "radius") config.radii = scalar_or_list<int>(value);
      else if (key == "eps") config.eps = value.get<double>();
      else if (key == "trials") config.trials = value.get<int>();
      else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "checkpoints") config.checkpoints = scalar_or_list<Step>(value);
      else if (key == "output") config.output = value.get<std::string>();
      else if (key == "threads") config.threads = value.get<int>();
      else if (key == "timing") config.record_timing = value.get<bool>();
      else if (key == "summary-noise") config.summary_noise = value.get<double>();
      else throw ConfigError("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
}

ExperimentConfig load_json_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  ExperimentConfig config;
  apply_json_config(config, text);
  return config;
}

namespace {

// One graph + side information on which every requested algorithm runs.
struct Workload {
  std::string model_id;
  StreamingGraph graph;
  std::vector<Label> truth;
  std::vector<Label> side;
  int k = 0;
  double a = 0.0;
  double b = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  int trial = 0;
};

struct WorkloadKey {
  int trial;
  std::size_t lambda_index;  // index into lambdas, or 0 when none
  std::size_t alpha_index;
};

int thread_count(const ExperimentConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("STREAMBP_THREADS"); env && *env) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

class WorkloadFactory {
 public:
  explicit WorkloadFactory(const ExperimentConfig& config) : config_(config) {
    if (!config.dataset_edges.empty()) {
      // Loaded once to learn the intensities; every trial reloads with its seed.
      dataset_ = load_edge_list(config.dataset_edges, config.dataset_labels, config.seed,
                                config.dataset_name);
    } else if (!config.instance_dir.empty()) {
      instance_ = read_instance(config.instance_dir);
    }
  }

  Workload build(const WorkloadKey& key) const {
    Workload w;
    w.trial = key.trial;
    w.seed = derive_seed(config_.seed, RngStream::kTrial, static_cast<std::uint64_t>(key.trial));
    w.alpha = config_.alphas[key.alpha_index];
    if (dataset_) {
      auto bundle = load_edge_list(config_.dataset_edges, config_.dataset_labels, w.seed,
                                   dataset_->name);
      w.model_id = bundle.name;
      w.k = bundle.k;
      w.a = bundle.estimated_a * (1.0 + config_.ab_perturb);
      w.b = bundle.estimated_b * (1.0 + config_.ab_perturb);
      w.side = synthesize_side_info(bundle.truth, w.k, w.alpha, w.seed);
      w.truth = std::move(bundle.truth);
      w.graph = std::move(bundle.graph);
    } else if (instance_) {
      w.model_id = "instance";
      w.k = instance_->params.k;
      w.a = instance_->params.W0(0, 0);
      w.b = w.k > 1 ? instance_->params.W0(0, 1) : 0.0;
      w.truth = instance_->tau;
      w.side = instance_->tau_tilde;
      w.alpha = instance_->params.alpha;
      w.graph = instance_->graph;
    } else {
      SymmetricParams p;
      p.n = config_.n;
      p.k = config_.k;
      p.a = config_.a;
      p.b = config_.b;
      p.alpha = w.alpha;
      if (!config_.lambdas.empty()) {
        const double total = config_.total_intensity.value_or(config_.a + (config_.k - 1) * config_.b);
        std::tie(p.a, p.b) = intensities_from_snr(config_.lambdas[key.lambda_index], total, config_.k);
      }
      auto inst = sample(p, w.seed);
      w.model_id = "stssbm";
      w.k = p.k;
      w.a = p.a;
      w.b = p.b;
      w.truth = std::move(inst.tau);
      w.side = std::move(inst.tau_tilde);
      w.graph = std::move(inst.graph);
    }
    w.lambda = w.k > 1 && (w.a + (w.k - 1) * w.b) > 0 ? snr(w.a, w.b, w.k) : 0.0;
    return w;
  }

 private:
  const ExperimentConfig& config_;
  std::optional<DatasetBundle> dataset_;
  std::optional<Instance> instance_;
};

std::vector<ResultRow> run_workload(const ExperimentConfig& config, const Workload& w) {
  std::vector<ResultRow> rows;
  KernelParams params;
  params.a = w.a;
  params.b = w.b;
  params.alpha = w.alpha;
  params.k = w.k;
  params.eps = config.eps;
  const VertexId n = w.graph.capacity();

  for (const auto& name : config.algorithms) {
    const bool radius_free = !algorithm_uses_radius(name);
    const std::vector<int> radii = radius_free ? std::vector<int>{1} : config.radii;
    for (int radius : radii) {
      ResultRow base;
      base.model_id = w.model_id;
      base.algorithm = name;
      base.n = n;
      base.k = w.k;
      base.a = w.a;
      base.b = w.b;
      base.lambda = w.lambda;
      base.alpha = w.alpha;
      base.radius = radius;
      base.eps = config.eps;
      base.seed = w.seed;
      base.trial = w.trial;

      auto algorithm = make_algorithm(name, n, params, radius, w.seed, config.summary_noise);
      if (config.mode == Mode::kTrace) {
        std::vector<Step> checkpoints = config.checkpoints;
        if (checkpoints.empty()) {
          for (int i = 0; i <= 10; ++i) checkpoints.push_back(std::max<Step>(1, Step{n} * i / 10));
          checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
        }
        for (Step& t : checkpoints) t = std::min<Step>(t, n);
        std::sort(checkpoints.begin(), checkpoints.end());
        checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
        for (const auto& point : accuracy_trace(*algorithm, w.graph, w.side, w.truth, w.k, checkpoints)) {
          ResultRow row = base;
          row.t = point.t;
          row.accuracy = point.accuracy;
          rows.push_back(row);
        }
        continue;
      }

      const auto start = std::chrono::steady_clock::now();
      replay(w.graph, w.side, *algorithm);
      const Estimates est = algorithm->finalize();
      const auto stop = std::chrono::steady_clock::now();
      ResultRow row = base;
      row.accuracy = accuracy(est.labels, w.truth, w.k).accuracy;
      row.runtime_ms = config.record_timing
                           ? std::chrono::duration<double, std::milli>(stop - start).count()
                           : 0.0;
      row.messages_touched = algorithm->messages_touched();
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.mode == Mode::kGenerate || config.mode == Mode::kEstimateParams) {
    throw ConfigError("mode: " + to_string(config.mode) + " does not produce result rows");
  }
  const WorkloadFactory factory(config);

  std::vector<WorkloadKey> keys;
  const std::size_t num_lambdas = std::max<std::size_t>(1, config.lambdas.size());
  for (int trial = 0; trial < config.trials; ++trial) {
    for (std::size_t li = 0; li < num_lambdas; ++li) {
      for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) keys.push_back({trial, li, ai});
    }
  }

  std::vector<std::vector<ResultRow>> results(keys.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= keys.size()) return;
      try {
        results[i] = run_workload(config, factory.build(keys[i]));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = keys.size();
      }
    }
  };
  const int workers = std::min<int>(thread_count(config), static_cast<int>(keys.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  std::vector<ResultRow> rows;
  for (auto& chunk : results) rows.insert(rows.end(), chunk.begin(), chunk.end());
  return rows;
}

void write_result_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "model_id,algorithm,n,k,a,b,lambda,alpha,R,eps,seed,trial,accuracy,runtime_ms,"
        "messages_touched\n";
  for (const auto& r : rows) {
    os << r.model_id << ',' << r.algorithm << ',' << r.n << ',' << r.k << ',' << fmt(r.a) << ','
       << fmt(r.b) << ',' << fmt(r.lambda) << ',' << fmt(r.alpha) << ',' << r.radius << ','
       << fmt(r.eps) << ',' << r.seed << ',' << r.trial << ',' << fmt(r.accuracy) << ','
       << fmt(r.runtime_ms) << ',' << r.messages_touched << '\n';
  }
}

void write_trace_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "model_id,algorithm,n,k,a,b,lambda,alpha,R,eps,seed,trial,t,accuracy\n";
  for (const auto& r : rows) {
    os << r.model_id << ',' << r.algorithm << ',' << r.n << ',' << r.k << ',' << fmt(r.a) << ','
       << fmt(r.b) << ',' << fmt(r.lambda) << ',' << fmt(r.alpha) << ',' << r.radius << ','
       << fmt(r.eps) << ',' << r.seed << ',' << r.trial << ',' << r.t << ',' << fmt(r.accuracy)
       << '\n';
  }
}

void write_parameter_estimates(std::ostream& os, const ExperimentConfig& config) {
  config.validate();
  const auto bundle =
      load_edge_list(config.dataset_edges, config.dataset_labels, config.seed, config.dataset_name);
  os << "dataset,vertices,edges,k,a,b\n";
  os << bundle.name << ',' << bundle.graph.num_vertices() << ',' << bundle.graph.num_edges() << ','
     << bundle.k << ',' << fmt(bundle.estimated_a) << ',' << fmt(bundle.estimated_b) << '\n';
}

void generate_instances(const ExperimentConfig& config) {
  config.validate();
  SymmetricParams p;
  p.n = config.n;
  p.k = config.k;
  p.a = config.a;
  p.b = config.b;
  p.alpha = config.alphas.front();
  if (!config.lambdas.empty()) {
    const double total = config.total_intensity.value_or(config.a + (config.k - 1) * config.b);
    std::tie(p.a, p.b) = intensities_from_snr(config.lambdas.front(), total, config.k);
  }
  for (int trial = 0; trial < config.trials; ++trial) {
    const auto seed = derive_seed(config.seed, RngStream::kTrial, static_cast<std::uint64_t>(trial));
    const auto dir = config.trials == 1 ? std::filesystem::path(config.output)
                                        : std::filesystem::path(config.output) /
                                              ("trial_" + std::to_string(trial));
    write_instance(sample(p, seed), dir);
  }
}

void execute(const ExperimentConfig& config) {
  config.validate();
  if (config.mode == Mode::kGenerate) {
    generate_instances(config);
    return;
  }
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!config.output.empty() && config.output != "-") {
    file.open(config.output);
    if (!file) throw InputError("output: cannot write " + config.output);
    os = &file;
  }
  if (config.mode == Mode::kEstimateParams) {
    write_parameter_estimates(*os, config);
  } else if (config.mode == Mode::kTrace) {
    write_trace_csv(*os, run_experiment(config));
  } else {
    write_result_csv(*os, run_experiment(config));
  }
}

}  // namespace streambp
