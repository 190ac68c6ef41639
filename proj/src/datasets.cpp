#include "streambp/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "streambp/error.hpp"
#include "streambp/model.hpp"
#include "streambp/rng.hpp"

namespace streambp {

namespace {

// Splits a data line into whitespace/comma separated tokens. Returns false for
// blank and comment lines.
bool tokenize(const std::string& line, std::vector<std::string>& tokens) {
  tokens.clear();
  std::string cleaned = line;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::replace(cleaned.begin(), cleaned.end(), '\t', ' ');
  std::istringstream is(cleaned);
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  return !tokens.empty() && tokens[0][0] != '#' && tokens[0][0] != '%';
}

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + i, s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

DatasetBundle load_edge_list(const std::filesystem::path& edges, const std::filesystem::path& labels,
                             std::uint64_t seed, std::string name) {
  DatasetBundle bundle;
  bundle.name = name.empty() ? edges.stem().string() : std::move(name);

  std::ifstream label_in(labels);
  if (!label_in) throw InputError("cannot open label file " + labels.string());
  std::unordered_map<std::string, VertexId> vertex_index;
  std::vector<std::string> raw_labels;
  std::string line;
  std::vector<std::string> tokens;
  long lineno = 0;
  while (std::getline(label_in, line)) {
    ++lineno;
    if (!tokenize(line, tokens)) continue;
    if (tokens.size() < 2) throw ParseError(labels.string(), lineno, "expected 'vertex label'");
    auto [it, fresh] = vertex_index.emplace(tokens[0], static_cast<VertexId>(bundle.vertex_names.size()));
    if (fresh) {
      bundle.vertex_names.push_back(tokens[0]);
      raw_labels.push_back(tokens[1]);
    } else if (raw_labels[it->second] != tokens[1]) {
      throw ParseError(labels.string(), lineno, "conflicting labels for vertex " + tokens[0]);
    }
  }
  const auto n = static_cast<VertexId>(bundle.vertex_names.size());
  if (n == 0) throw InputError("empty graph: no labeled vertices in " + labels.string());

  std::vector<std::string> alphabet(raw_labels.begin(), raw_labels.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  if (std::all_of(alphabet.begin(), alphabet.end(), is_integer)) {
    std::sort(alphabet.begin(), alphabet.end(),
              [](const std::string& x, const std::string& y) { return std::stoll(x) < std::stoll(y); });
  }
  std::unordered_map<std::string, Label> label_index;
  for (std::size_t i = 0; i < alphabet.size(); ++i) label_index[alphabet[i]] = static_cast<Label>(i);
  bundle.label_names = alphabet;
  bundle.k = static_cast<int>(alphabet.size());
  bundle.truth.reserve(n);
  for (const auto& raw : raw_labels) bundle.truth.push_back(label_index.at(raw));

  std::ifstream edge_in(edges);
  if (!edge_in) throw InputError("cannot open edge file " + edges.string());
  std::set<std::pair<VertexId, VertexId>> edge_set;
  lineno = 0;
  while (std::getline(edge_in, line)) {
    ++lineno;
    if (!tokenize(line, tokens)) continue;
    if (tokens.size() < 2) throw ParseError(edges.string(), lineno, "expected 'u v'");
    ++bundle.cleaning.raw_edge_lines;
    auto iu = vertex_index.find(tokens[0]);
    auto iv = vertex_index.find(tokens[1]);
    if (iu == vertex_index.end() || iv == vertex_index.end()) {
      ++bundle.cleaning.unlabeled_endpoint;
      continue;
    }
    const VertexId u = iu->second, v = iv->second;
    if (u == v) {
      ++bundle.cleaning.self_loops;
      continue;
    }
    if (!edge_set.emplace(std::min(u, v), std::max(u, v)).second) ++bundle.cleaning.duplicates;
  }
  if (edge_set.empty()) throw InputError("empty graph: no usable edges in " + edges.string());

  const std::vector<std::pair<VertexId, VertexId>> edge_list(edge_set.begin(), edge_set.end());
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, RngStream::kPermutation);
  rng.shuffle(std::span<VertexId>(order));
  bundle.graph = build_streaming_graph(n, edge_list, order);

  std::tie(bundle.estimated_a, bundle.estimated_b) = estimate_ab(bundle.graph, bundle.truth, bundle.k);
  return bundle;
}

std::pair<double, double> estimate_ab(const StreamingGraph& graph, std::span<const Label> truth, int k) {
  if (truth.size() != static_cast<std::size_t>(graph.capacity())) {
    throw InputError("estimate_ab: one label per vertex required");
  }
  std::vector<double> sizes(k, 0.0);
  for (Label s : truth) {
    if (s < 0 || s >= k) throw LabelError("estimate_ab: label out of range");
    sizes[s] += 1.0;
  }
  if (std::any_of(sizes.begin(), sizes.end(), [](double c) { return c < 1.0; })) {
    throw EstimationError("estimate_ab: every community must be nonempty");
  }
  double intra = 0.0, inter = 0.0;
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    const auto [u, v] = graph.endpoints(e);
    (truth[u] == truth[v] ? intra : inter) += 1.0;
  }
  double intra_pairs = 0.0, inter_pairs = 0.0;
  for (int i = 0; i < k; ++i) {
    intra_pairs += sizes[i] * (sizes[i] - 1.0) / 2.0;
    for (int j = i + 1; j < k; ++j) inter_pairs += sizes[i] * sizes[j];
  }
  if (intra_pairs == 0.0 || inter_pairs == 0.0) {
    throw EstimationError("estimate_ab: need at least one intra- and one inter-community pair");
  }
  const double n = static_cast<double>(truth.size());
  return {n * intra / intra_pairs, n * inter / inter_pairs};
}

std::vector<Label> synthesize_side_info(std::span<const Label> truth, int k, double alpha,
                                        std::uint64_t seed) {
  Rng rng(seed, RngStream::kNoise);
  return noisy_labels(truth, k, alpha, rng);
}

const std::vector<DatasetInfo>& known_datasets() {
  static const std::vector<DatasetInfo> datasets = {
      {"citeseer", "citeseer.edges", "citeseer.labels", 3264, 4536, 6, 11.47, 0.89},
      {"cora", "cora.edges", "cora.labels", 2708, 5278, 7, 17.62, 0.90},
      {"polblogs", "polblogs.edges", "polblogs.labels", 1490, 16715, 2, 40.69, 4.23},
  };
  return datasets;
}

std::filesystem::path dataset_directory(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("STREAMBP_DATA_DIR"); env && *env) return env;
  return fallback;
}

}  // namespace streambp
