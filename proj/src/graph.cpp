#include "streambp/graph.hpp"

#include <algorithm>
#include <string>

#include "streambp/error.hpp"

namespace streambp {

StreamingGraph::StreamingGraph(VertexId capacity) {
  if (capacity < 0) throw ParameterError("graph capacity must be nonnegative");
  arrival_step_.assign(capacity, 0);
  adjacency_.resize(capacity);
  incident_.resize(capacity);
  arrival_order_.reserve(capacity);
}

Step StreamingGraph::insert_vertex(std::span<const VertexId> new_edges) {
  const VertexId v = capacity();
  arrival_step_.push_back(0);
  adjacency_.emplace_back();
  incident_.emplace_back();
  try {
    return insert_vertex(v, new_edges);
  } catch (...) {
    arrival_step_.pop_back();
    adjacency_.pop_back();
    incident_.pop_back();
    throw;
  }
}

Step StreamingGraph::insert_vertex(VertexId v, std::span<const VertexId> new_edges) {
  if (v < 0 || v >= capacity()) {
    throw InvalidEdgeError("vertex id " + std::to_string(v) + " outside reserved range");
  }
  if (arrival_step_[v] != 0) {
    throw InvalidEdgeError("vertex " + std::to_string(v) + " has already arrived");
  }

  std::vector<VertexId> sorted(new_edges.begin(), new_edges.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const VertexId u = sorted[i];
    if (u == v) throw InvalidEdgeError("self-loop at vertex " + std::to_string(v));
    if (!has_arrived(u)) {
      throw InvalidEdgeError("edge endpoint " + std::to_string(u) + " has not arrived");
    }
    if (i > 0 && sorted[i - 1] == u) {
      throw DuplicateEdgeError("duplicate edge " + std::to_string(v) + "-" + std::to_string(u));
    }
  }

  arrival_order_.push_back(v);
  const Step t = current_step();
  arrival_step_[v] = t;

  auto& own_adj = adjacency_[v];
  auto& own_inc = incident_[v];
  own_adj.reserve(sorted.size());
  own_inc.reserve(sorted.size());
  for (VertexId u : sorted) {
    const EdgeId e = num_edges();
    endpoints_.emplace_back(u, v);
    own_adj.push_back(u);
    own_inc.push_back(e);

    auto& adj = adjacency_[u];
    auto pos = std::lower_bound(adj.begin(), adj.end(), v);
    const auto offset = pos - adj.begin();
    adj.insert(pos, v);
    incident_[u].insert(incident_[u].begin() + offset, e);
  }
  return t;
}

bool StreamingGraph::has_edge(VertexId u, VertexId v) const {
  if (!has_arrived(u) || !has_arrived(v)) return false;
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<VertexId> earlier_neighbors(const StreamingGraph& graph, VertexId v) {
  std::vector<VertexId> out;
  const Step t = graph.arrival_step(v);
  for (VertexId u : graph.neighbors(v)) {
    if (graph.arrival_step(u) < t) out.push_back(u);
  }
  return out;
}

int NeighborhoodBall::distance(VertexId v) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), v,
                             [](const auto& entry, VertexId id) { return entry.first < id; });
  return it != members_.end() && it->first == v ? it->second : -1;
}

std::vector<VertexId> NeighborhoodBall::vertices() const {
  std::vector<VertexId> out;
  out.reserve(members_.size());
  for (const auto& [v, d] : members_) out.push_back(v);
  return out;
}

const NeighborhoodBall& BallSearch::run(const StreamingGraph& graph, VertexId center, int radius,
                                        Step t) {
  if (radius < 0) throw ParameterError("ball radius must be nonnegative");
  if (t > graph.current_step()) {
    throw OutOfStreamError("step " + std::to_string(t) + " is past the current step " +
                           std::to_string(graph.current_step()));
  }
  if (!graph.has_arrived(center) || graph.arrival_step(center) > t) {
    throw OutOfStreamError("vertex " + std::to_string(center) + " has not arrived by step " +
                           std::to_string(t));
  }
  if (stamp_.size() < static_cast<std::size_t>(graph.capacity())) {
    stamp_.resize(graph.capacity(), 0);
    dist_.resize(graph.capacity(), -1);
  }
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }

  ball_.center_ = center;
  ball_.time_ = t;
  ball_.shells_.assign(1, {center});
  stamp_[center] = epoch_;
  dist_[center] = 0;

  for (int r = 1; r <= radius; ++r) {
    std::vector<VertexId> next;
    for (VertexId u : ball_.shells_[r - 1]) {
      for (VertexId w : graph.neighbors(u)) {
        if (stamp_[w] == epoch_ || graph.arrival_step(w) > t) continue;
        stamp_[w] = epoch_;
        dist_[w] = r;
        next.push_back(w);
      }
    }
    std::sort(next.begin(), next.end());
    ball_.shells_.push_back(std::move(next));
  }

  ball_.members_.clear();
  for (int r = 0; r <= radius; ++r) {
    for (VertexId v : ball_.shells_[r]) ball_.members_.emplace_back(v, r);
  }
  std::sort(ball_.members_.begin(), ball_.members_.end());
  return ball_;
}

void BallSearch::parents(const StreamingGraph& graph, VertexId v,
                         std::vector<VertexId>& out) const {
  out.clear();
  const int d = distance(v);
  if (d <= 0) return;
  for (VertexId u : graph.neighbors(v)) {
    if (distance(u) == d - 1) out.push_back(u);
  }
}

NeighborhoodBall ball(const StreamingGraph& graph, VertexId center, int radius, Step t) {
  BallSearch search;
  return search.run(graph, center, radius, t);
}

NeighborhoodBall ball(const StreamingGraph& graph, VertexId center, int radius) {
  return ball(graph, center, radius, graph.current_step());
}

std::vector<VertexId> shortest_path_parents(const StreamingGraph& graph,
                                            const NeighborhoodBall& ball, VertexId v) {
  std::vector<VertexId> out;
  const int d = ball.distance(v);
  if (d <= 0) return out;
  for (VertexId u : graph.neighbors(v)) {
    if (ball.distance(u) == d - 1) out.push_back(u);
  }
  return out;
}

}  // namespace streambp
