#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "streambp/graph.hpp"
#include "streambp/types.hpp"

namespace streambp {

struct CleaningStats {
  std::size_t raw_edge_lines = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;  // includes the reverse copy of a directed pair
  std::size_t unlabeled_endpoint = 0;
};

// A real graph with ground-truth communities, made undirected and simple, and
// revealed in a seeded uniformly random order.
struct DatasetBundle {
  std::string name;
  StreamingGraph graph;
  std::vector<Label> truth;
  int k = 0;
  double estimated_a = 0.0;
  double estimated_b = 0.0;
  std::vector<std::string> vertex_names;  // original ids, by dense id
  std::vector<std::string> label_names;   // original labels, by dense label
  CleaningStats cleaning;
};

// Edge file: "u v" per line (extra columns ignored, ',' accepted as a
// separator, lines starting with '#' or '%' skipped). Label file: "v label" per
// line. Vertex ids follow first appearance in the label file; labels are
// compacted to [0, k) in sorted order (numeric when every label is an
// integer). Edges touching an unlabeled vertex are dropped, as are self-loops
// and repeated pairs in either direction. Vertices without edges are kept.
DatasetBundle load_edge_list(const std::filesystem::path& edges, const std::filesystem::path& labels,
                             std::uint64_t seed, std::string name = {});

// Intra/inter densities scaled by |V|:
//   a = |V| * (#intra edges) / sum_i C(|V_i|, 2)
//   b = |V| * (#inter edges) / sum_{i<j} |V_i| |V_j|
// Throws EstimationError when either denominator is zero or a community is empty.
std::pair<double, double> estimate_ab(const StreamingGraph& graph, std::span<const Label> truth, int k);
inline std::pair<double, double> estimate_ab(const DatasetBundle& bundle) {
  return estimate_ab(bundle.graph, bundle.truth, bundle.k);
}

// Independent noisy copy of the truth through the side-information channel.
std::vector<Label> synthesize_side_info(std::span<const Label> truth, int k, double alpha,
                                        std::uint64_t seed);

// Known datasets and their expected statistics after cleaning.
struct DatasetInfo {
  std::string name;
  std::string edges_file;
  std::string labels_file;
  VertexId vertices;
  EdgeId edges;
  int k;
  double a;
  double b;
};
const std::vector<DatasetInfo>& known_datasets();

// Directory holding dataset files: $STREAMBP_DATA_DIR if set, else `fallback`.
std::filesystem::path dataset_directory(const std::filesystem::path& fallback);

}  // namespace streambp
