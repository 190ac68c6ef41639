#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "streambp/algorithm.hpp"
#include "streambp/graph.hpp"
#include "streambp/kernel.hpp"

namespace streambp {

// Messages on directed edges, `layers` beliefs of length k per direction.
// Slots follow StreamingGraph::directed_slot. New slots start uniform, which
// is also how a never-written message reads.
class MessageStore {
 public:
  MessageStore(int k, int layers) : k_(k), layers_(layers) {}

  int k() const { return k_; }
  int layers() const { return layers_; }
  std::int64_t num_slots() const {
    return static_cast<std::int64_t>(data_.size()) / (static_cast<std::int64_t>(k_) * layers_);
  }
  // Grows to cover 2 * num_edges slots.
  void cover_edges(EdgeId num_edges);

  Eigen::Map<Eigen::VectorXd> at(std::int64_t slot, int layer = 0) {
    return Eigen::Map<Eigen::VectorXd>(data_.data() + offset(slot, layer), k_);
  }
  Eigen::Map<const Eigen::VectorXd> at(std::int64_t slot, int layer = 0) const {
    return Eigen::Map<const Eigen::VectorXd>(data_.data() + offset(slot, layer), k_);
  }

 private:
  std::size_t offset(std::int64_t slot, int layer) const {
    return (static_cast<std::size_t>(slot) * layers_ + layer) * k_;
  }
  int k_;
  int layers_;
  std::vector<double> data_;
};

// Streaming R-local belief propagation. On each arrival it refreshes the
// messages into the new vertex, then the messages flowing away from it along
// shortest paths, shell by shell out to distance R.
class StreamBp final : public StreamingAlgorithm {
 public:
  StreamBp(VertexId capacity, const KernelParams& params, int radius);

  void insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) override;
  Estimates finalize() const override;
  const StreamingGraph& graph() const override { return graph_; }
  std::uint64_t messages_touched() const override { return touched_total_; }
  std::uint64_t last_insert_touched() const { return touched_last_; }

  int radius() const { return radius_; }
  const KernelParams& params() const { return params_; }
  // Message from -> to. Both endpoints must be adjacent.
  BeliefVector message(VertexId from, VertexId to) const;
  std::int64_t message_count() const { return messages_.num_slots(); }

 private:
  void update(VertexId from, VertexId to);

  StreamingGraph graph_;
  KernelParams params_;
  int radius_;
  std::vector<SideLabel> side_;
  MessageStore messages_;
  BpAccumulator<double> acc_;
  BallSearch search_;
  std::vector<VertexId> parents_;
  std::uint64_t touched_total_ = 0;
  std::uint64_t touched_last_ = 0;
};

// Bounded-distance variant: each directed edge carries R + 1 messages, where
// layer i only sees information within distance i of its tail. Layer 0 is
// always uniform, and vertex estimates read layer R, so the estimate at v is a
// function of the radius-R ball around v alone.
class StreamBpStar final : public StreamingAlgorithm {
 public:
  StreamBpStar(VertexId capacity, const KernelParams& params, int radius);

  void insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) override;
  Estimates finalize() const override;
  const StreamingGraph& graph() const override { return graph_; }
  std::uint64_t messages_touched() const override { return touched_total_; }
  std::uint64_t last_insert_touched() const { return touched_last_; }

  int radius() const { return radius_; }
  BeliefVector message(VertexId from, VertexId to, int layer) const;
  // Directed messages times layers.
  std::int64_t message_count() const { return messages_.num_slots() * messages_.layers(); }

 private:
  // Rewrites layers 1..R of from -> to from layers 0..R-1 into `from`.
  void update_layers(VertexId from, VertexId to);

  StreamingGraph graph_;
  KernelParams params_;
  int radius_;
  std::vector<SideLabel> side_;
  MessageStore messages_;
  BpAccumulator<double> acc_;
  BallSearch search_;
  std::vector<VertexId> parents_;
  std::uint64_t touched_total_ = 0;
  std::uint64_t touched_last_ = 0;
};

// Locates the slot index of the directed edge from -> to, or -1.
std::int64_t find_slot(const StreamingGraph& graph, VertexId from, VertexId to);

}  // namespace streambp
