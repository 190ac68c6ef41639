#pragma once

#include <span>
#include <vector>

#include "streambp/algorithm.hpp"
#include "streambp/graph.hpp"

namespace streambp {

// Streaming plurality vote (Vote1X/Vote2X/Vote3X for weight 1/2/3). An
// arriving vertex scores each label by `weight` for its own side label plus
// one per already-estimated neighbor, and keeps the winner forever.
// Ties go to the side label when it is among the maximizers, else to the
// lowest label.
class Voting final : public StreamingAlgorithm {
 public:
  Voting(VertexId capacity, int k, int weight);

  void insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) override;
  Estimates finalize() const override;
  const StreamingGraph& graph() const override { return graph_; }
  std::uint64_t messages_touched() const override { return graph_.current_step(); }

  Label estimate(VertexId v) const { return estimates_.at(v); }
  int weight() const { return weight_; }

 private:
  StreamingGraph graph_;
  int k_;
  int weight_;
  std::vector<Label> estimates_;
  std::vector<long> scores_;
};

}  // namespace streambp
