#include "streambp/summary.hpp"

#include <algorithm>
#include <cmath>

#include "streambp/error.hpp"

namespace streambp {

void SummarySpec::validate() const {
  if (dim < 1) throw ParameterError("summary spec: state dimension must be positive");
  if (k < 1) throw ParameterError("summary spec: k must be positive");
  if (radius < 0) throw ParameterError("summary spec: radius must be nonnegative");
  if (max_action < 1) throw ParameterError("summary spec: max_action must be positive");
  if (!(noise >= 0.0)) throw ParameterError("summary spec: noise must be nonnegative");
  if (!select || !vertex_update || !edge_update || !vertex_init || !edge_init || !estimator) {
    throw ParameterError("summary spec '" + name + "' is missing a function");
  }
}

SummarySpec neighbor_mean_spec(int k, double noise, std::size_t max_action) {
  SummarySpec spec;
  spec.name = "neighbor-mean";
  spec.dim = 1;
  spec.k = k;
  spec.radius = 1;
  spec.max_action = max_action;
  spec.bound = 1.0;
  spec.noise = noise;
  spec.lipschitz_probe_interval = 97;

  spec.select = [max_action](const StreamingGraph& graph, const NeighborhoodBall& ball) {
    RangeOfAction range;
    const VertexId center = ball.center();
    range.vertices.push_back(center);
    const auto nbrs = graph.neighbors(center);
    const auto edges = graph.incident_edges(center);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      if (range.vertices.size() + range.edges.size() + 2 > max_action) break;
      if (!ball.contains(nbrs[j])) continue;
      range.vertices.push_back(nbrs[j]);
      range.edges.push_back(edges[j]);
    }
    return range;
  };

  spec.vertex_update = [](const SummaryView& view, std::size_t i) {
    const VertexId x = view.vertices[i];
    const Eigen::VectorXd own = view.vertex_states.col(i) - view.vertex_mean;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(own.size());
    int count = 0;
    for (const auto& [u, w] : view.edges) {
      VertexId other;
      if (u == x) {
        other = w;
      } else if (w == x) {
        other = u;
      } else {
        continue;
      }
      const auto it = std::find(view.vertices.begin(), view.vertices.end(), other);
      acc += view.vertex_states.col(it - view.vertices.begin()) - view.vertex_mean;
      ++count;
    }
    if (count == 0) return Eigen::VectorXd(own.array().tanh());
    return Eigen::VectorXd((0.5 * own + 0.5 * acc / count).array().tanh());
  };

  spec.edge_update = [](const SummaryView& view, std::size_t j) {
    const auto [u, w] = view.edges[j];
    auto local = [&](VertexId x) {
      return std::find(view.vertices.begin(), view.vertices.end(), x) - view.vertices.begin();
    };
    const Eigen::VectorXd product =
        view.vertex_states.col(local(u)).cwiseProduct(view.vertex_states.col(local(w)));
    return Eigen::VectorXd(
        (0.5 * view.edge_states.col(j) + 0.5 * product - view.edge_mean).array().tanh());
  };

  spec.vertex_init = [](Rng& rng) { return Eigen::VectorXd::Constant(1, rng.uniform()); };
  spec.edge_init = [](Rng& rng) { return Eigen::VectorXd::Constant(1, rng.uniform()); };

  spec.estimator = [k](const Eigen::VectorXd& w) {
    const double x = std::clamp(w(0), -1.0, 1.0);
    return static_cast<Label>(std::min<double>(k - 1, std::floor((x + 1.0) / 2.0 * k)));
  };
  return spec;
}

SummarySpec summary_spec_by_name(const std::string& name, int k, double noise) {
  if (name == "neighbor-mean") return neighbor_mean_spec(k, noise);
  throw ConfigError("unknown summary spec '" + name + "' (available: neighbor-mean)");
}

SummaryAlgorithm::SummaryAlgorithm(VertexId capacity, SummarySpec spec, std::uint64_t seed)
    : graph_(capacity),
      spec_(std::move(spec)),
      seed_(seed),
      init_rng_(seed, RngStream::kSummaryInit) {
  spec_.validate();
  vertex_states_ = Eigen::MatrixXd::Zero(spec_.dim, capacity);
  vertex_sum_ = Eigen::VectorXd::Zero(spec_.dim);
  edge_sum_ = Eigen::VectorXd::Zero(spec_.dim);
}

Eigen::VectorXd SummaryAlgorithm::vertex_mean() const {
  const auto count = graph_.num_vertices();
  return count > 0 ? Eigen::VectorXd(vertex_sum_ / count) : Eigen::VectorXd::Zero(spec_.dim);
}

Eigen::VectorXd SummaryAlgorithm::edge_mean() const {
  const auto count = graph_.num_edges();
  return count > 0 ? Eigen::VectorXd(edge_sum_ / static_cast<double>(count))
                   : Eigen::VectorXd::Zero(spec_.dim);
}

Eigen::VectorXd SummaryAlgorithm::batch_vertex_mean() const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(spec_.dim);
  for (VertexId v : graph_.arrival_order()) sum += vertex_states_.col(v);
  const auto count = graph_.num_vertices();
  return count > 0 ? Eigen::VectorXd(sum / count) : sum;
}

Eigen::VectorXd SummaryAlgorithm::batch_edge_mean() const {
  const auto count = graph_.num_edges();
  if (count == 0) return Eigen::VectorXd::Zero(spec_.dim);
  return edge_states_.leftCols(count).rowwise().mean();
}

void SummaryAlgorithm::insert(VertexId v, SideLabel, std::span<const VertexId> earlier) {
  const Eigen::VectorXd prev_vertex_mean = vertex_mean();
  const Eigen::VectorXd prev_edge_mean = edge_mean();
  const bool prev_edge_defined = edge_mean_defined();

  const EdgeId first_new_edge = graph_.num_edges();
  graph_.insert_vertex(v, earlier);

  vertex_states_.col(v) = spec_.vertex_init(init_rng_);
  vertex_sum_ += vertex_states_.col(v);
  if (edge_states_.cols() < graph_.num_edges()) {
    const auto grow = std::max<Eigen::Index>(graph_.num_edges(), 2 * edge_states_.cols() + 16);
    edge_states_.conservativeResize(spec_.dim, grow);
  }
  for (EdgeId e = first_new_edge; e < graph_.num_edges(); ++e) {
    edge_states_.col(e) = spec_.edge_init(init_rng_);
    edge_sum_ += edge_states_.col(e);
  }

  const auto& ball = search_.run(graph_, v, spec_.radius);
  const RangeOfAction range = spec_.select(graph_, ball);
  if (range.vertices.size() + range.edges.size() > spec_.max_action) {
    throw SpecViolationError("range of action exceeds max_action for spec '" + spec_.name + "'");
  }

  Eigen::MatrixXd local_vertices(spec_.dim, range.vertices.size());
  for (std::size_t i = 0; i < range.vertices.size(); ++i) {
    if (!ball.contains(range.vertices[i])) {
      throw SpecViolationError("range of action leaves the neighborhood ball");
    }
    local_vertices.col(i) = vertex_states_.col(range.vertices[i]);
  }
  std::vector<std::pair<VertexId, VertexId>> local_edge_ends;
  Eigen::MatrixXd local_edges(spec_.dim, range.edges.size());
  for (std::size_t j = 0; j < range.edges.size(); ++j) {
    const EdgeId e = range.edges[j];
    if (e < 0 || e >= graph_.num_edges()) throw SpecViolationError("range edge id out of range");
    const auto ends = graph_.endpoints(e);
    if (!ball.contains(ends.first) || !ball.contains(ends.second)) {
      throw SpecViolationError("range of action leaves the neighborhood ball");
    }
    local_edge_ends.push_back(ends);
    local_edges.col(j) = edge_states_.col(e);
  }

  const SummaryView view{graph_.current_step(), v,           range.vertices,
                         local_vertices,        local_edge_ends, local_edges,
                         prev_vertex_mean,      prev_edge_mean, prev_edge_defined};

  auto check = [&](const Eigen::VectorXd& value) {
    if (value.size() != spec_.dim) throw SpecViolationError("update map returned wrong dimension");
    if (!value.allFinite()) throw NumericDomainError("update map returned a non-finite value");
    if (value.cwiseAbs().maxCoeff() > spec_.bound) ++bound_violations_;
  };

  Eigen::MatrixXd new_vertices(spec_.dim, range.vertices.size());
  for (std::size_t i = 0; i < range.vertices.size(); ++i) {
    new_vertices.col(i) = spec_.vertex_update(view, i);
    check(new_vertices.col(i));
  }
  Eigen::MatrixXd new_edges(spec_.dim, range.edges.size());
  for (std::size_t j = 0; j < range.edges.size(); ++j) {
    new_edges.col(j) = spec_.edge_update(view, j);
    check(new_edges.col(j));
  }

  if (spec_.lipschitz_probe_interval > 0 && !range.vertices.empty() &&
      graph_.current_step() % spec_.lipschitz_probe_interval == 0) {
    probe_lipschitz(view);
  }

  for (std::size_t i = 0; i < range.vertices.size(); ++i) {
    const VertexId x = range.vertices[i];
    vertex_sum_ += new_vertices.col(i) - vertex_states_.col(x);
    vertex_states_.col(x) = new_vertices.col(i);
  }
  for (std::size_t j = 0; j < range.edges.size(); ++j) {
    const EdgeId e = range.edges[j];
    edge_sum_ += new_edges.col(j) - edge_states_.col(e);
    edge_states_.col(e) = new_edges.col(j);
  }
  touched_ += range.vertices.size() + range.edges.size();
}

// Finite-difference check of the vertex map against the declared bound, on the
// first range vertex, in each input coordinate of its own state and of the
// vertex mean. Advisory only: violations are counted, not thrown.
void SummaryAlgorithm::probe_lipschitz(const SummaryView& view) {
  constexpr double h = 1e-6;
  const Eigen::VectorXd base = spec_.vertex_update(view, 0);
  for (int c = 0; c < spec_.dim; ++c) {
    Eigen::MatrixXd states = view.vertex_states;
    states(c, 0) += h;
    const SummaryView moved_state{view.step,  view.arriving,    view.vertices,
                                  states,     view.edges,       view.edge_states,
                                  view.vertex_mean, view.edge_mean, view.edge_mean_defined};
    Eigen::VectorXd mean = view.vertex_mean;
    mean(c) += h;
    const SummaryView moved_mean{view.step,  view.arriving, view.vertices,
                                 view.vertex_states, view.edges, view.edge_states,
                                 mean,       view.edge_mean, view.edge_mean_defined};
    for (const SummaryView* probe : {&moved_state, &moved_mean}) {
      const double slope = (spec_.vertex_update(*probe, 0) - base).cwiseAbs().maxCoeff() / h;
      if (slope > spec_.bound * (1.0 + 1e-3)) ++lipschitz_violations_;
    }
  }
}

Estimates SummaryAlgorithm::estimate(std::uint64_t seed) const {
  Rng rng(seed, RngStream::kSummaryNoise);
  Estimates out;
  out.labels.assign(graph_.capacity(), kUnassigned);
  Eigen::VectorXd perturbed(spec_.dim);
  // Noise is drawn per vertex id so the draw does not depend on arrival order.
  for (VertexId v = 0; v < graph_.capacity(); ++v) {
    for (int c = 0; c < spec_.dim; ++c) perturbed(c) = rng.uniform(-1.0, 1.0);
    if (!graph_.has_arrived(v)) continue;
    perturbed = vertex_states_.col(v) + spec_.noise * perturbed;
    const Label label = spec_.estimator(perturbed);
    if (label < 0 || label >= spec_.k) throw SpecViolationError("estimator returned invalid label");
    out.labels[v] = label;
  }
  return out;
}

Estimates SummaryAlgorithm::finalize() const { return estimate(seed_); }

}  // namespace streambp
