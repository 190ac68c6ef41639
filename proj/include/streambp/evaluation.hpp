#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "streambp/algorithm.hpp"
#include "streambp/types.hpp"

namespace streambp {

struct AccuracyReport {
  // max over relabelings pi of the fraction of vertices with estimate == pi(truth).
  double accuracy = 0.0;
  // best_permutation[true label] = estimated label.
  std::vector<Label> best_permutation;
  // confusion(estimated, true) counts.
  Eigen::MatrixXi confusion;
  std::size_t count = 0;
};

// Assignment maximizing sum_j weights(perm[j], j). Both are exact; the
// brute-force version enumerates all k! permutations.
std::vector<int> hungarian_max_assignment(const Eigen::MatrixXd& weights);
std::vector<int> brute_force_max_assignment(const Eigen::MatrixXd& weights);

// Uses brute force for k <= 8, Hungarian above. Throws InputError on length
// mismatch and LabelError on labels outside [0, k).
AccuracyReport accuracy(std::span<const Label> estimates, std::span<const Label> truth, int k);
// Restricted to the listed vertices.
AccuracyReport accuracy(std::span<const Label> estimates, std::span<const Label> truth, int k,
                        std::span<const VertexId> vertices);

struct TracePoint {
  Step t = 0;
  double accuracy = 0.0;
};

// Drives `algorithm` through the arrivals of `graph` and, at each checkpoint t
// (sorted, 1 <= t <= n), scores finalize() on the vertices revealed so far with
// its own best relabeling.
std::vector<TracePoint> accuracy_trace(StreamingAlgorithm& algorithm, const StreamingGraph& graph,
                                       std::span<const Label> side, std::span<const Label> truth,
                                       int k, std::span<const Step> checkpoints);

}  // namespace streambp
