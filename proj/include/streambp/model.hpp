#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "streambp/graph.hpp"
#include "streambp/rng.hpp"
#include "streambp/types.hpp"

namespace streambp {

// Streaming SBM: n vertices, community prior p over k labels, edge
// probability W0(s, s') / n, side-information noise alpha.
struct ModelParams {
  VertexId n = 0;
  int k = 2;
  Eigen::VectorXd p;
  Eigen::MatrixXd W0;
  double alpha = 0.0;

  // Throws ParameterError naming the violated invariant.
  void validate() const;
};

// Symmetric special case: uniform prior, a on the diagonal of W0, b off it.
struct SymmetricParams {
  VertexId n = 0;
  int k = 2;
  double a = 0.0;
  double b = 0.0;
  double alpha = 0.0;

  void validate() const;
};

ModelParams symmetric_to_general(const SymmetricParams& params);

// Signal-to-noise ratio (a - b)^2 / (a + (k - 1) b); values above 1 are above
// the Kesten-Stigum threshold.
double snr(double a, double b, int k);

// Inverse of snr() at fixed total intensity a + (k - 1) b. For k = 2 the
// total is simply a + b. Throws ParameterError when the pair would need b < 0.
std::pair<double, double> intensities_from_snr(double lambda, double total, int k);

struct Instance {
  StreamingGraph graph;
  std::vector<Label> tau;
  std::vector<Label> tau_tilde;
  ModelParams params;
  std::uint64_t seed = 0;
};

Instance sample(const ModelParams& params, std::uint64_t seed);
inline Instance sample(const SymmetricParams& params, std::uint64_t seed) {
  return sample(symmetric_to_general(params), seed);
}

// Side information channel: keeps the true label with probability 1 - alpha,
// otherwise picks uniformly among the other k - 1 labels.
std::vector<Label> noisy_labels(std::span<const Label> truth, int k, double alpha, Rng& rng);

// Builds a streaming graph from an undirected edge list and an arrival order
// (arrival_order[t - 1] is the vertex revealed at step t).
StreamingGraph build_streaming_graph(VertexId n,
                                     std::span<const std::pair<VertexId, VertexId>> edges,
                                     std::span<const VertexId> arrival_order);

// Instance files under `directory`, all 0-based:
//   edges.txt    "u v" per line, u < v, sorted
//   labels.txt   "v tau" per line
//   side.txt     "v tau_tilde" per line
//   arrival.txt  "t v" per line, t starting at 1
//   params.json  n, k, p, W0, alpha, seed
void write_instance(const Instance& instance, const std::filesystem::path& directory);
Instance read_instance(const std::filesystem::path& directory);

}  // namespace streambp
