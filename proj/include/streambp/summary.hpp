#pragma once

// Local streaming algorithms with summary statistics.
//
// The state is one m-vector per revealed vertex and per edge. When a vertex
// arrives, a bounded "range of action" inside its radius-R ball is chosen and
// only those vertex/edge states are rewritten, by update maps that see the
// previous states in the range plus two global averages (mean vertex state,
// mean edge state). Labels are read off the final vertex states after adding
// a small uniform perturbation.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "streambp/algorithm.hpp"
#include "streambp/graph.hpp"
#include "streambp/rng.hpp"

namespace streambp {

struct RangeOfAction {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
};

// Everything an update map is allowed to read.
struct SummaryView {
  Step step;
  VertexId arriving;
  std::span<const VertexId> vertices;
  const Eigen::MatrixXd& vertex_states;  // m x |vertices|, previous values
  std::span<const std::pair<VertexId, VertexId>> edges;
  const Eigen::MatrixXd& edge_states;  // m x |edges|, previous values
  const Eigen::VectorXd& vertex_mean;
  // Zero vector with edge_mean_defined == false while there are no edges.
  const Eigen::VectorXd& edge_mean;
  bool edge_mean_defined;
};

struct SummarySpec {
  std::string name;
  int dim = 1;
  int k = 2;
  int radius = 1;
  // C_act: cap on |range vertices| + |range edges|.
  std::size_t max_action = 33;
  // L_F: declared sup-norm and Lipschitz bound of the update maps.
  double bound = 1.0;
  // Magnitude of the uniform perturbation added before estimating.
  double noise = 0.0;
  // Run the sampled Lipschitz probe every this many inserts (0 = never).
  int lipschitz_probe_interval = 0;

  std::function<RangeOfAction(const StreamingGraph&, const NeighborhoodBall&)> select;
  std::function<Eigen::VectorXd(const SummaryView&, std::size_t vertex_index)> vertex_update;
  std::function<Eigen::VectorXd(const SummaryView&, std::size_t edge_index)> edge_update;
  std::function<Eigen::VectorXd(Rng&)> vertex_init;
  std::function<Eigen::VectorXd(Rng&)> edge_init;
  std::function<Label(const Eigen::VectorXd&)> estimator;

  void validate() const;
};

// Bundled spec. Range of action: the arriving vertex, its neighbors (lowest ids
// first, truncated to fit max_action) and the edges joining them. With
// d(x) = w(x) - mean vertex state, a range vertex becomes
// tanh(d(x)/2 + mean of d over its range neighbors / 2), or tanh(d(x)) with no
// range neighbors; an edge becomes tanh(e/2 + w(i) w(j)/2 - mean edge state).
// States start uniform on [0, 1]; the estimator splits [-1, 1] into k equal
// bins by the first coordinate.
SummarySpec neighbor_mean_spec(int k = 2, double noise = 0.05, std::size_t max_action = 33);

// "neighbor-mean" is the only bundled name. Throws ConfigError otherwise.
SummarySpec summary_spec_by_name(const std::string& name, int k, double noise);

class SummaryAlgorithm final : public StreamingAlgorithm {
 public:
  SummaryAlgorithm(VertexId capacity, SummarySpec spec, std::uint64_t seed);

  // Side labels are not visible to the update maps and are ignored.
  void insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) override;
  // estimate() with the construction seed.
  Estimates finalize() const override;
  const StreamingGraph& graph() const override { return graph_; }
  std::uint64_t messages_touched() const override { return touched_; }

  // Labels estimator(w_i + noise * U_i), U_i iid uniform on [-1, 1]^m from `seed`.
  Estimates estimate(std::uint64_t seed) const;

  const SummarySpec& spec() const { return spec_; }
  Eigen::VectorXd vertex_state(VertexId v) const { return vertex_states_.col(v); }
  Eigen::VectorXd edge_state(EdgeId e) const { return edge_states_.col(e); }
  Eigen::VectorXd vertex_mean() const;
  Eigen::VectorXd edge_mean() const;
  bool edge_mean_defined() const { return graph_.num_edges() > 0; }
  // Mean recomputed from scratch, for consistency checks.
  Eigen::VectorXd batch_vertex_mean() const;
  Eigen::VectorXd batch_edge_mean() const;

  std::uint64_t bound_violations() const { return bound_violations_; }
  std::uint64_t lipschitz_violations() const { return lipschitz_violations_; }

 private:
  void probe_lipschitz(const SummaryView& view);

  StreamingGraph graph_;
  SummarySpec spec_;
  std::uint64_t seed_;
  Rng init_rng_;
  Eigen::MatrixXd vertex_states_;  // m x capacity
  Eigen::MatrixXd edge_states_;    // m x allocated edges
  Eigen::VectorXd vertex_sum_;
  Eigen::VectorXd edge_sum_;
  BallSearch search_;
  std::uint64_t touched_ = 0;
  std::uint64_t bound_violations_ = 0;
  std::uint64_t lipschitz_violations_ = 0;
};

}  // namespace streambp
