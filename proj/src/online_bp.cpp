#include "streambp/online_bp.hpp"

#include <algorithm>
#include <string>

#include "streambp/error.hpp"

namespace streambp {

void MessageStore::cover_edges(EdgeId num_edges) {
  const std::size_t want = static_cast<std::size_t>(2 * num_edges) * layers_ * k_;
  if (data_.size() < want) data_.resize(want, 1.0 / k_);
}

std::int64_t find_slot(const StreamingGraph& graph, VertexId from, VertexId to) {
  if (!graph.has_arrived(from)) return -1;
  const auto nbrs = graph.neighbors(from);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), to);
  if (it == nbrs.end() || *it != to) return -1;
  return graph.directed_slot(graph.incident_edges(from)[it - nbrs.begin()], from);
}

namespace {

void check_radius(int radius) {
  if (radius < 0) throw ParameterError("radius must be nonnegative");
}

}  // namespace

// ---------------------------------------------------------------------------
// StreamBp

StreamBp::StreamBp(VertexId capacity, const KernelParams& params, int radius)
    : graph_(capacity),
      params_(params),
      radius_(radius),
      side_(capacity),
      messages_(params.k, 1),
      acc_(params) {
  params_.validate();
  check_radius(radius);
}

BeliefVector StreamBp::message(VertexId from, VertexId to) const {
  const auto slot = find_slot(graph_, from, to);
  if (slot < 0) throw InvalidEdgeError("no edge " + std::to_string(from) + "->" + std::to_string(to));
  return messages_.at(slot);
}

// m_{from->to} <- BP({m_{u->from} : u in N(from) \ {to}}; side(from)).
void StreamBp::update(VertexId from, VertexId to) {
  const auto nbrs = graph_.neighbors(from);
  const auto edges = graph_.incident_edges(from);
  acc_.reset(side_[from]);
  EdgeId out_edge = -1;
  for (std::size_t j = 0; j < nbrs.size(); ++j) {
    if (nbrs[j] == to) {
      out_edge = edges[j];
      continue;
    }
    acc_.add(messages_.at(graph_.directed_slot(edges[j], nbrs[j])));
  }
  acc_.write(messages_.at(graph_.directed_slot(out_edge, from)));
  ++touched_last_;
}

void StreamBp::insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) {
  check_side_label(side, params_.k);
  graph_.insert_vertex(v, earlier);
  side_[v] = side;
  messages_.cover_edges(graph_.num_edges());
  touched_last_ = 0;

  for (VertexId w : graph_.neighbors(v)) update(w, v);

  if (radius_ > 0 && graph_.degree(v) > 0) {
    const auto& shells = search_.run(graph_, v, radius_);
    for (int r = 1; r <= radius_; ++r) {
      for (VertexId x : shells.shell(r)) {
        search_.parents(graph_, x, parents_);
        for (VertexId p : parents_) update(p, x);
      }
    }
  }
  touched_total_ += touched_last_;
}

Estimates StreamBp::finalize() const {
  const VertexId cap = graph_.capacity();
  Estimates out;
  out.labels.assign(cap, kUnassigned);
  out.beliefs = Eigen::MatrixXd::Zero(params_.k, cap);
  BpAccumulator<double> acc(params_);
  for (VertexId u : graph_.arrival_order()) {
    acc.reset(side_[u]);
    const auto nbrs = graph_.neighbors(u);
    const auto edges = graph_.incident_edges(u);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      acc.add(messages_.at(graph_.directed_slot(edges[j], nbrs[j])));
    }
    acc.write(out.beliefs.col(u));
    out.labels[u] = argmax(out.beliefs.col(u));
  }
  return out;
}

// ---------------------------------------------------------------------------
// StreamBpStar

StreamBpStar::StreamBpStar(VertexId capacity, const KernelParams& params, int radius)
    : graph_(capacity),
      params_(params),
      radius_(radius),
      side_(capacity),
      messages_(params.k, radius + 1),
      acc_(params) {
  params_.validate();
  check_radius(radius);
}

BeliefVector StreamBpStar::message(VertexId from, VertexId to, int layer) const {
  if (layer < 0 || layer > radius_) throw ParameterError("message layer out of range");
  const auto slot = find_slot(graph_, from, to);
  if (slot < 0) throw InvalidEdgeError("no edge " + std::to_string(from) + "->" + std::to_string(to));
  return messages_.at(slot, layer);
}

void StreamBpStar::update_layers(VertexId from, VertexId to) {
  const auto nbrs = graph_.neighbors(from);
  const auto edges = graph_.incident_edges(from);
  EdgeId out_edge = -1;
  for (std::size_t j = 0; j < nbrs.size(); ++j) {
    if (nbrs[j] == to) out_edge = edges[j];
  }
  const auto out_slot = graph_.directed_slot(out_edge, from);
  for (int layer = 1; layer <= radius_; ++layer) {
    acc_.reset(side_[from]);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      if (nbrs[j] == to) continue;
      acc_.add(messages_.at(graph_.directed_slot(edges[j], nbrs[j]), layer - 1));
    }
    acc_.write(messages_.at(out_slot, layer));
    ++touched_last_;
  }
}

void StreamBpStar::insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) {
  check_side_label(side, params_.k);
  graph_.insert_vertex(v, earlier);
  side_[v] = side;
  messages_.cover_edges(graph_.num_edges());
  touched_last_ = 0;

  // Layer 0 of every slot keeps its initial uniform value.
  for (VertexId w : graph_.neighbors(v)) update_layers(w, v);
  for (VertexId w : graph_.neighbors(v)) update_layers(v, w);

  if (radius_ >= 2 && graph_.degree(v) > 0) {
    const auto& shells = search_.run(graph_, v, radius_);
    for (int r = 2; r <= radius_; ++r) {
      for (VertexId x : shells.shell(r)) {
        search_.parents(graph_, x, parents_);
        for (VertexId p : parents_) update_layers(p, x);
      }
    }
  }
  touched_total_ += touched_last_;
}

Estimates StreamBpStar::finalize() const {
  const VertexId cap = graph_.capacity();
  Estimates out;
  out.labels.assign(cap, kUnassigned);
  out.beliefs = Eigen::MatrixXd::Zero(params_.k, cap);
  BpAccumulator<double> acc(params_);
  for (VertexId u : graph_.arrival_order()) {
    acc.reset(side_[u]);
    const auto nbrs = graph_.neighbors(u);
    const auto edges = graph_.incident_edges(u);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      acc.add(messages_.at(graph_.directed_slot(edges[j], nbrs[j]), radius_));
    }
    acc.write(out.beliefs.col(u));
    out.labels[u] = argmax(out.beliefs.col(u));
  }
  return out;
}

}  // namespace streambp
