#include "streambp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "streambp/error.hpp"

namespace streambp {

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_alpha(double alpha, int k) {
  const double max_alpha = static_cast<double>(k - 1) / k;
  if (!(alpha >= 0.0) || alpha > max_alpha + 1e-15) {
    throw ParameterError("alpha=" + fmt_double(alpha) + " outside [0, (k-1)/k]");
  }
}

// Calls emit(i, j) for every success of independent Bernoulli(prob) trials
// over the pairs of one community block, skipping geometrically between hits.
template <typename Emit>
void sample_block(const std::vector<VertexId>& lhs, const std::vector<VertexId>& rhs,
                  bool same_block, double prob, Rng& rng, Emit&& emit) {
  if (prob <= 0.0) return;
  if (same_block) {
    const std::uint64_t m = lhs.size();
    if (m < 2) return;
    std::uint64_t row = 0;
    std::uint64_t col = 1;  // pairs (row, col) with row < col
    for (;;) {
      std::uint64_t skip = rng.geometric(prob);
      while (row < m - 1) {
        const std::uint64_t left_in_row = m - col;
        if (skip < left_in_row) break;
        skip -= left_in_row;
        ++row;
        col = row + 1;
      }
      if (row >= m - 1) return;
      col += skip;
      emit(lhs[row], lhs[col]);
      ++col;
      if (col >= m) {
        ++row;
        col = row + 1;
        if (row >= m - 1) return;
      }
    }
  } else {
    const std::uint64_t total = static_cast<std::uint64_t>(lhs.size()) * rhs.size();
    if (total == 0) return;
    std::uint64_t pos = 0;
    for (;;) {
      const std::uint64_t skip = rng.geometric(prob);
      if (skip >= total - pos) return;
      pos += skip;
      emit(lhs[pos / rhs.size()], rhs[pos % rhs.size()]);
      if (++pos >= total) return;
    }
  }
}

}  // namespace

void ModelParams::validate() const {
  if (n < 0) throw ParameterError("n must be nonnegative");
  if (k < 1) throw ParameterError("k must be at least 1");
  if (p.size() != k) throw ParameterError("p must have k entries");
  if (W0.rows() != k || W0.cols() != k) throw ParameterError("W0 must be k x k");
  if ((p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-12) {
    throw ParameterError("p must be a probability vector");
  }
  if ((W0.array() < 0.0).any() || !W0.allFinite()) {
    throw ParameterError("W0 entries must be finite and nonnegative");
  }
  if ((W0 - W0.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw ParameterError("W0 must be symmetric");
  }
  if (n > 0 && W0.maxCoeff() > n) throw ParameterError("W0 / n entries must not exceed 1");
  check_alpha(alpha, k);
}

void SymmetricParams::validate() const {
  if (n < 0) throw ParameterError("n must be nonnegative");
  if (k < 1) throw ParameterError("k must be at least 1");
  if (!(a >= 0.0) || !(b >= 0.0)) throw ParameterError("a and b must be nonnegative");
  if (a == 0.0 && b == 0.0) throw ParameterError("a and b must not both be zero");
  if (n > 0 && (a > n || b > n)) throw ParameterError("a / n and b / n must not exceed 1");
  check_alpha(alpha, k);
}

ModelParams symmetric_to_general(const SymmetricParams& params) {
  params.validate();
  ModelParams out;
  out.n = params.n;
  out.k = params.k;
  out.p = Eigen::VectorXd::Constant(params.k, 1.0 / params.k);
  out.W0 = Eigen::MatrixXd::Constant(params.k, params.k, params.b);
  out.W0.diagonal().setConstant(params.a);
  out.alpha = params.alpha;
  return out;
}

double snr(double a, double b, int k) {
  const double denom = a + (k - 1) * b;
  if (!(denom > 0.0)) throw ParameterError("snr: a + (k-1) b must be positive");
  return (a - b) * (a - b) / denom;
}

std::pair<double, double> intensities_from_snr(double lambda, double total, int k) {
  if (k < 2) throw ParameterError("snr inversion needs k >= 2");
  if (!(lambda >= 0.0) || !(total > 0.0)) {
    throw ParameterError("snr inversion needs lambda >= 0 and positive total intensity");
  }
  const double gap = std::sqrt(lambda * total);
  const double b = (total - gap) / k;
  if (b < 0.0) throw ParameterError("lambda too large for the requested total intensity");
  return {b + gap, b};
}

std::vector<Label> noisy_labels(std::span<const Label> truth, int k, double alpha, Rng& rng) {
  check_alpha(alpha, k);
  std::vector<Label> out(truth.begin(), truth.end());
  if (k == 1) return out;
  for (auto& label : out) {
    if (label < 0 || label >= k) throw LabelError("label out of range");
    if (rng.uniform() < alpha) {
      // Uniform over the k - 1 other labels.
      const auto shift = static_cast<Label>(1 + rng.below(k - 1));
      label = (label + shift) % k;
    }
  }
  return out;
}

StreamingGraph build_streaming_graph(VertexId n,
                                     std::span<const std::pair<VertexId, VertexId>> edges,
                                     std::span<const VertexId> arrival_order) {
  std::vector<std::vector<VertexId>> adj(n);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw InvalidEdgeError("edge endpoint out of range");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  StreamingGraph graph(n);
  std::vector<VertexId> earlier;
  for (VertexId v : arrival_order) {
    earlier.clear();
    for (VertexId u : adj[v]) {
      if (graph.has_arrived(u)) earlier.push_back(u);
    }
    graph.insert_vertex(v, earlier);
  }
  return graph;
}

Instance sample(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  const VertexId n = params.n;
  const int k = params.k;

  Instance inst;
  inst.params = params;
  inst.seed = seed;

  Rng label_rng(seed, RngStream::kLabels);
  inst.tau.resize(n);
  for (auto& label : inst.tau) {
    const double u = label_rng.uniform();
    double acc = 0.0;
    label = k - 1;
    for (int s = 0; s < k; ++s) {
      acc += params.p[s];
      if (u < acc) {
        label = s;
        break;
      }
    }
  }

  Rng noise_rng(seed, RngStream::kNoise);
  inst.tau_tilde = noisy_labels(inst.tau, k, params.alpha, noise_rng);

  std::vector<std::vector<VertexId>> members(k);
  for (VertexId v = 0; v < n; ++v) members[inst.tau[v]].push_back(v);

  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int c = 0; c < k; ++c) {
    for (int d = c; d < k; ++d) {
      // Each block gets its own substream so blocks do not shift each other.
      Rng edge_rng(seed, RngStream::kEdges, static_cast<std::uint64_t>(c) * k + d);
      const double prob = n > 0 ? params.W0(c, d) / n : 0.0;
      sample_block(members[c], members[d], c == d, prob, edge_rng,
                   [&](VertexId u, VertexId v) { edges.emplace_back(u, v); });
    }
  }

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng perm_rng(seed, RngStream::kPermutation);
  perm_rng.shuffle(std::span<VertexId>(order));

  inst.graph = build_streaming_graph(n, edges, order);
  return inst;
}

void write_instance(const Instance& instance, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  const auto& g = instance.graph;

  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    auto [u, v] = g.endpoints(e);
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());

  auto open = [&](const char* name) {
    std::ofstream os(directory / name);
    if (!os) throw InputError("cannot write " + (directory / name).string());
    return os;
  };
  {
    auto os = open("edges.txt");
    for (const auto& [u, v] : edges) os << u << ' ' << v << '\n';
  }
  {
    auto os = open("labels.txt");
    for (std::size_t v = 0; v < instance.tau.size(); ++v) os << v << ' ' << instance.tau[v] << '\n';
  }
  {
    auto os = open("side.txt");
    for (std::size_t v = 0; v < instance.tau_tilde.size(); ++v) {
      os << v << ' ' << instance.tau_tilde[v] << '\n';
    }
  }
  {
    auto os = open("arrival.txt");
    for (Step t = 1; t <= g.current_step(); ++t) os << t << ' ' << g.vertex_at(t) << '\n';
  }
  {
    const auto& p = instance.params;
    nlohmann::ordered_json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["p"] = std::vector<double>(p.p.data(), p.p.data() + p.p.size());
    std::vector<std::vector<double>> w(p.k, std::vector<double>(p.k));
    for (int r = 0; r < p.k; ++r)
      for (int c = 0; c < p.k; ++c) w[r][c] = p.W0(r, c);
    j["W0"] = w;
    j["alpha"] = p.alpha;
    j["seed"] = instance.seed;
    auto os = open("params.json");
    os << j.dump(2) << '\n';
  }
}

namespace {

std::vector<std::pair<long long, long long>> read_pairs(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path.string());
  std::vector<std::pair<long long, long long>> out;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long x, y;
    if (!(ls >> x >> y)) throw ParseError(path.string(), lineno, "expected two integers");
    out.emplace_back(x, y);
  }
  return out;
}

}  // namespace

Instance read_instance(const std::filesystem::path& directory) {
  Instance inst;
  {
    std::ifstream is(directory / "params.json");
    if (!is) throw InputError("cannot open " + (directory / "params.json").string());
    nlohmann::json j;
    try {
      is >> j;
      auto& p = inst.params;
      p.n = j.at("n").get<VertexId>();
      p.k = j.at("k").get<int>();
      const auto pv = j.at("p").get<std::vector<double>>();
      p.p = Eigen::Map<const Eigen::VectorXd>(pv.data(), static_cast<Eigen::Index>(pv.size()));
      const auto w = j.at("W0").get<std::vector<std::vector<double>>>();
      p.W0.resize(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(w.size()));
      for (std::size_t r = 0; r < w.size(); ++r) {
        if (w[r].size() != w.size()) throw ParameterError("W0 must be square");
        for (std::size_t c = 0; c < w.size(); ++c) p.W0(r, c) = w[r][c];
      }
      p.alpha = j.at("alpha").get<double>();
      inst.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
      throw InputError("params.json: " + std::string(e.what()));
    }
    inst.params.validate();
  }
  const VertexId n = inst.params.n;

  auto read_labels = [&](const char* name) {
    std::vector<Label> labels(n, kUnassigned);
    for (auto [v, s] : read_pairs(directory / name)) {
      if (v < 0 || v >= n) throw InputError(std::string(name) + ": vertex out of range");
      if (s < 0 || s >= inst.params.k) throw LabelError(std::string(name) + ": label out of range");
      labels[v] = static_cast<Label>(s);
    }
    if (std::find(labels.begin(), labels.end(), kUnassigned) != labels.end()) {
      throw InputError(std::string(name) + ": missing labels");
    }
    return labels;
  };
  inst.tau = read_labels("labels.txt");
  inst.tau_tilde = read_labels("side.txt");

  std::vector<std::pair<VertexId, VertexId>> edges;
  for (auto [u, v] : read_pairs(directory / "edges.txt")) {
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  const auto arrivals = read_pairs(directory / "arrival.txt");
  std::vector<VertexId> order(n, -1);
  if (arrivals.size() != static_cast<std::size_t>(n)) throw InputError("arrival.txt: wrong length");
  for (auto [t, v] : arrivals) {
    if (t < 1 || t > n || v < 0 || v >= n) throw InputError("arrival.txt: entry out of range");
    order[t - 1] = static_cast<VertexId>(v);
  }
  inst.graph = build_streaming_graph(n, edges, order);
  return inst;
}

}  // namespace streambp
