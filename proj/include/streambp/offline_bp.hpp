#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "streambp/algorithm.hpp"
#include "streambp/graph.hpp"
#include "streambp/kernel.hpp"

namespace streambp {

struct OfflineBpOptions {
  // Nonzero: visit directed edges in a shuffled order within each round.
  // Results do not depend on it; it exists to check exactly that.
  std::uint64_t edge_order_seed = 0;
};

// Offline BP with radius R: all messages start uniform, R - 1 synchronous
// rounds of the non-backtracking update run over every directed edge of the
// whole graph, then each vertex combines all of its incoming messages.
class OfflineBpRun {
 public:
  OfflineBpRun(const StreamingGraph& graph, std::span<const Label> side,
               const KernelParams& params, int radius, OfflineBpOptions options = {});

  // Executes the remaining rounds and returns vertex estimates.
  Estimates run();
  int rounds_executed() const { return rounds_; }
  std::uint64_t messages_touched() const { return touched_; }

 private:
  void round();

  const StreamingGraph& graph_;
  std::vector<SideLabel> side_;
  KernelParams params_;
  int radius_;
  OfflineBpOptions options_;
  std::vector<std::int64_t> order_;  // directed slots in visiting order
  Eigen::MatrixXd old_;              // k x slots
  Eigen::MatrixXd new_;
  int rounds_ = 0;
  std::uint64_t touched_ = 0;
};

// Labels of kUnassigned in `side` mean "no side information".
Estimates offline_bp_run(const StreamingGraph& graph, std::span<const Label> side,
                         const KernelParams& params, int radius);

// Streaming adapter: collects the graph and runs offline BP on finalize().
class OfflineBp final : public StreamingAlgorithm {
 public:
  OfflineBp(VertexId capacity, const KernelParams& params, int radius);

  void insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) override;
  Estimates finalize() const override;
  const StreamingGraph& graph() const override { return graph_; }
  std::uint64_t messages_touched() const override { return touched_; }

 private:
  StreamingGraph graph_;
  KernelParams params_;
  int radius_;
  std::vector<Label> side_;
  mutable std::uint64_t touched_ = 0;
};

}  // namespace streambp
