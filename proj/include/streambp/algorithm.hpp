#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "streambp/graph.hpp"
#include "streambp/types.hpp"

namespace streambp {

// Per-vertex output of an algorithm. Vertices that have not arrived carry
// kUnassigned. `beliefs` is k x capacity when the algorithm produces
// marginals, empty otherwise.
struct Estimates {
  std::vector<Label> labels;
  Eigen::MatrixXd beliefs;

  bool has_beliefs() const { return beliefs.size() > 0; }
};

// An algorithm fed one vertex at a time, with its side label and its edges to
// earlier vertices.
class StreamingAlgorithm {
 public:
  virtual ~StreamingAlgorithm() = default;

  virtual void insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) = 0;
  virtual Estimates finalize() const = 0;
  virtual const StreamingGraph& graph() const = 0;
  // Cumulative number of message (or state) writes.
  virtual std::uint64_t messages_touched() const { return 0; }
};

// Feeds the vertices of `graph` to `algorithm` in arrival order. `on_step` is
// called after each insertion with the step just completed.
void replay(const StreamingGraph& graph, std::span<const Label> side,
            StreamingAlgorithm& algorithm, const std::function<void(Step)>& on_step = {});

}  // namespace streambp
