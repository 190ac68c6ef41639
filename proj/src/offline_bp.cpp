#include "streambp/offline_bp.hpp"

#include <numeric>
#include <utility>

#include "streambp/error.hpp"
#include "streambp/rng.hpp"

namespace streambp {

OfflineBpRun::OfflineBpRun(const StreamingGraph& graph, std::span<const Label> side,
                           const KernelParams& params, int radius, OfflineBpOptions options)
    : graph_(graph), params_(params), radius_(radius), options_(options) {
  params_.validate();
  if (radius < 1) throw ParameterError("offline BP radius must be at least 1");
  if (side.size() != static_cast<std::size_t>(graph.capacity())) {
    throw InputError("offline BP: side labels must cover every vertex id");
  }
  side_.reserve(side.size());
  for (Label s : side) {
    const SideLabel label = s >= 0 ? SideLabel(s) : SideLabel{};
    check_side_label(label, params.k);
    side_.push_back(label);
  }
  const std::int64_t slots = 2 * graph.num_edges();
  order_.resize(slots);
  std::iota(order_.begin(), order_.end(), 0);
  if (options_.edge_order_seed != 0) {
    Rng rng(options_.edge_order_seed, RngStream::kOther);
    rng.shuffle(std::span<std::int64_t>(order_));
  }
  old_ = Eigen::MatrixXd::Constant(params.k, slots, 1.0 / params.k);
  new_ = old_;
}

void OfflineBpRun::round() {
  BpAccumulator<double> acc(params_);
  for (std::int64_t slot : order_) {
    const EdgeId e = slot / 2;
    const auto [first, second] = graph_.endpoints(e);
    const VertexId from = (slot % 2 == 0) ? first : second;
    const VertexId to = (slot % 2 == 0) ? second : first;
    const auto nbrs = graph_.neighbors(from);
    const auto edges = graph_.incident_edges(from);
    acc.reset(side_[from]);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      if (nbrs[j] == to) continue;
      acc.add(old_.col(graph_.directed_slot(edges[j], nbrs[j])));
    }
    acc.write(new_.col(slot));
  }
  touched_ += order_.size();
  std::swap(old_, new_);
  ++rounds_;
}

Estimates OfflineBpRun::run() {
  while (rounds_ < radius_ - 1) round();

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
      acc.add(old_.col(graph_.directed_slot(edges[j], nbrs[j])));
    }
    acc.write(out.beliefs.col(u));
    out.labels[u] = argmax(out.beliefs.col(u));
  }
  return out;
}

Estimates offline_bp_run(const StreamingGraph& graph, std::span<const Label> side,
                         const KernelParams& params, int radius) {
  OfflineBpRun run(graph, side, params, radius);
  return run.run();
}

OfflineBp::OfflineBp(VertexId capacity, const KernelParams& params, int radius)
    : graph_(capacity), params_(params), radius_(radius), side_(capacity, kUnassigned) {
  params_.validate();
  if (radius < 1) throw ParameterError("offline BP radius must be at least 1");
}

void OfflineBp::insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) {
  check_side_label(side, params_.k);
  graph_.insert_vertex(v, earlier);
  side_[v] = side ? *side : kUnassigned;
}

Estimates OfflineBp::finalize() const {
  OfflineBpRun run(graph_, side_, params_, radius_);
  auto out = run.run();
  touched_ += run.messages_touched();
  return out;
}

}  // namespace streambp
