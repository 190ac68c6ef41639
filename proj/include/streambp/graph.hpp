#pragma once

#include <span>
#include <utility>
#include <vector>

#include "streambp/types.hpp"

namespace streambp {

// Undirected simple graph revealed one vertex at a time. Every edge joins the
// vertex being inserted to a vertex that arrived earlier, so the graph at
// step t is exactly the subgraph induced by the first t arrivals.
//
// Vertex ids are dense. They may be handed out on insertion (id == capacity
// before the call) or reserved up front and revealed in any order, which is
// how replay of a recorded instance works.
class StreamingGraph {
 public:
  StreamingGraph() = default;
  explicit StreamingGraph(VertexId capacity);

  // Appends a fresh vertex with id capacity() and returns its arrival step.
  Step insert_vertex(std::span<const VertexId> new_edges);
  // Reveals a reserved id. Throws InvalidEdgeError for absent endpoints or
  // self-loops, DuplicateEdgeError for repeated endpoints.
  Step insert_vertex(VertexId v, std::span<const VertexId> new_edges);

  VertexId capacity() const { return static_cast<VertexId>(arrival_step_.size()); }
  VertexId num_vertices() const { return static_cast<VertexId>(arrival_order_.size()); }
  EdgeId num_edges() const { return static_cast<EdgeId>(endpoints_.size()); }
  Step current_step() const { return static_cast<Step>(arrival_order_.size()); }

  bool has_arrived(VertexId v) const {
    return v >= 0 && v < capacity() && arrival_step_[v] != 0;
  }
  Step arrival_step(VertexId v) const { return arrival_step_.at(v); }
  // Vertex revealed at step t (1-based).
  VertexId vertex_at(Step t) const { return arrival_order_.at(t - 1); }
  std::span<const VertexId> arrival_order() const { return arrival_order_; }

  // Sorted ascending.
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_[v]; }
  // Edge ids parallel to neighbors(v).
  std::span<const EdgeId> incident_edges(VertexId v) const { return incident_[v]; }
  std::size_t degree(VertexId v) const { return adjacency_[v].size(); }
  bool has_edge(VertexId u, VertexId v) const;

  // (earlier endpoint, later endpoint).
  std::pair<VertexId, VertexId> endpoints(EdgeId e) const { return endpoints_[e]; }

  // Index of the directed message slot `from -> other endpoint` of edge e, in [0, 2|E|).
  std::int64_t directed_slot(EdgeId e, VertexId from) const {
    return 2 * e + (from == endpoints_[e].second ? 1 : 0);
  }

 private:
  std::vector<Step> arrival_step_;
  std::vector<VertexId> arrival_order_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::pair<VertexId, VertexId>> endpoints_;
};

// Neighbors of v that arrived before v. These are exactly the edges that were
// inserted together with v.
std::vector<VertexId> earlier_neighbors(const StreamingGraph& graph, VertexId v);

// Shells D_0..D_R of the ball of radius R around a vertex, in the graph as it
// stood at a given step.
class NeighborhoodBall {
 public:
  NeighborhoodBall() = default;

  VertexId center() const { return center_; }
  int radius() const { return static_cast<int>(shells_.size()) - 1; }
  Step time() const { return time_; }

  // Vertices at distance exactly r, ascending id.
  std::span<const VertexId> shell(int r) const { return shells_.at(r); }
  const std::vector<std::vector<VertexId>>& shells() const { return shells_; }

  // Distance from the center, or -1 when v is outside the ball.
  int distance(VertexId v) const;
  bool contains(VertexId v) const { return distance(v) >= 0; }
  std::size_t size() const { return members_.size(); }
  // All members, ascending id.
  std::vector<VertexId> vertices() const;

 private:
  friend class BallSearch;
  VertexId center_ = 0;
  Step time_ = 0;
  std::vector<std::vector<VertexId>> shells_;
  std::vector<std::pair<VertexId, int>> members_;  // sorted by id
};

// Reusable BFS workspace. The distance table stays valid until the next run(),
// giving O(1) lookups during message scheduling.
class BallSearch {
 public:
  BallSearch() = default;

  // Throws OutOfStreamError if the center has not arrived by step t.
  const NeighborhoodBall& run(const StreamingGraph& graph, VertexId center, int radius, Step t);
  const NeighborhoodBall& run(const StreamingGraph& graph, VertexId center, int radius) {
    return run(graph, center, radius, graph.current_step());
  }

  const NeighborhoodBall& ball() const { return ball_; }
  int distance(VertexId v) const {
    return v < static_cast<VertexId>(stamp_.size()) && stamp_[v] == epoch_ ? dist_[v] : -1;
  }
  // Neighbors of v one shell closer to the center, ascending id.
  void parents(const StreamingGraph& graph, VertexId v, std::vector<VertexId>& out) const;

 private:
  NeighborhoodBall ball_;
  std::vector<int> dist_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

NeighborhoodBall ball(const StreamingGraph& graph, VertexId center, int radius, Step t);
NeighborhoodBall ball(const StreamingGraph& graph, VertexId center, int radius);

// All neighbors of v lying in the previous shell, ascending id. Empty for the
// center or for vertices outside the ball.
std::vector<VertexId> shortest_path_parents(const StreamingGraph& graph,
                                            const NeighborhoodBall& ball, VertexId v);

}  // namespace streambp
