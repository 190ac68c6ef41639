#include <doctest.h>

#include <cmath>

#include "streambp/error.hpp"
#include "streambp/evaluation.hpp"
#include "streambp/model.hpp"
#include "streambp/summary.hpp"

using namespace streambp;

namespace {

SummarySpec constant_init_spec(double noise = 0.0) {
  auto spec = neighbor_mean_spec(2, noise);
  spec.vertex_init = [](Rng&) { return Eigen::VectorXd::Constant(1, 0.5); };
  spec.edge_init = [](Rng&) { return Eigen::VectorXd::Constant(1, 0.2); };
  return spec;
}

}  // namespace

TEST_SUITE("summary") {

TEST_CASE("hand trace of one neighbor-mean insert") {
  SummaryAlgorithm algo(6, constant_init_spec(), 1);
  algo.insert(0, SideLabel{}, {});
  algo.insert(1, SideLabel{}, std::vector<VertexId>{0});
  algo.insert(2, SideLabel{}, std::vector<VertexId>{0});
  algo.insert(3, SideLabel{}, std::vector<VertexId>{1});
  algo.insert(4, SideLabel{}, {});

  double w[6];
  for (int v = 0; v < 5; ++v) w[v] = algo.vertex_state(v)(0);
  w[5] = 0.5;
  double mu = 0.0;
  for (int v = 0; v < 5; ++v) mu += w[v] / 5;
  const double ebar = (algo.edge_state(0)(0) + algo.edge_state(1)(0) + algo.edge_state(2)(0)) / 3;

  algo.insert(5, SideLabel{}, std::vector<VertexId>{0, 3});
  // New edges 3 = (0, 5) and 4 = (3, 5) start at 0.2.
  const double d0 = w[0] - mu, d3 = w[3] - mu, d5 = w[5] - mu;
  CHECK(algo.vertex_state(5)(0) == doctest::Approx(std::tanh(0.5 * d5 + 0.25 * (d0 + d3))).epsilon(1e-14));
  CHECK(algo.vertex_state(0)(0) == doctest::Approx(std::tanh(0.5 * d0 + 0.5 * d5)).epsilon(1e-14));
  CHECK(algo.vertex_state(3)(0) == doctest::Approx(std::tanh(0.5 * d3 + 0.5 * d5)).epsilon(1e-14));
  CHECK(algo.vertex_state(1)(0) == w[1]);
  CHECK(algo.edge_state(3)(0) == doctest::Approx(std::tanh(0.1 + 0.5 * w[0] * w[5] - ebar)).epsilon(1e-14));
  CHECK(algo.edge_state(4)(0) == doctest::Approx(std::tanh(0.1 + 0.5 * w[3] * w[5] - ebar)).epsilon(1e-14));
}

TEST_CASE("edge mean is flagged undefined before the first edge") {
  auto spec = constant_init_spec();
  std::vector<bool> seen;
  const auto inner = spec.vertex_update;
  spec.vertex_update = [&](const SummaryView& view, std::size_t i) {
    if (i == 0) {
      seen.push_back(view.edge_mean_defined);
      CHECK((view.edge_mean_defined || view.edge_mean.isZero()));
    }
    return inner(view, i);
  };
  SummaryAlgorithm algo(3, spec, 1);
  algo.insert(0, SideLabel{}, {});
  algo.insert(1, SideLabel{}, std::vector<VertexId>{0});
  algo.insert(2, SideLabel{}, std::vector<VertexId>{1});
  CHECK(seen == std::vector<bool>{false, false, true});
}

TEST_CASE("identity maps keep the averages at their initial values") {
  auto spec = neighbor_mean_spec(2, 0.0);
  spec.vertex_update = [](const SummaryView& view, std::size_t i) {
    return Eigen::VectorXd(view.vertex_states.col(i));
  };
  spec.edge_update = [](const SummaryView& view, std::size_t j) {
    return Eigen::VectorXd(view.edge_states.col(j));
  };
  const auto inst = sample(SymmetricParams{5000, 2, 4.0, 1.0, 0.0}, 2);
  SummaryAlgorithm algo(5000, spec, 3);
  replay(inst.graph, inst.tau_tilde, algo);
  CHECK(algo.vertex_mean()(0) == doctest::Approx(0.5).epsilon(0.03));
  CHECK(algo.edge_mean()(0) == doctest::Approx(0.5).epsilon(0.03));
  CHECK(algo.bound_violations() == 0);
}

TEST_CASE("incremental means agree with recomputation") {
  const auto inst = sample(SymmetricParams{3000, 2, 7.5, 0.1, 0.5}, 4);
  SummaryAlgorithm algo(3000, neighbor_mean_spec(2), 5);
  replay(inst.graph, inst.tau_tilde, algo);
  CHECK((algo.vertex_mean() - algo.batch_vertex_mean()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((algo.edge_mean() - algo.batch_edge_mean()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(algo.bound_violations() == 0);
  CHECK(algo.lipschitz_violations() == 0);
}

TEST_CASE("degenerate estimator with zero noise") {
  auto spec = neighbor_mean_spec(2, 0.0);
  spec.vertex_init = [](Rng&) { return Eigen::VectorXd::Zero(1); };
  spec.vertex_update = [](const SummaryView&, std::size_t) { return Eigen::VectorXd::Zero(1); };
  const auto inst = sample(SymmetricParams{500, 2, 4.0, 1.0, 0.0}, 6);
  SummaryAlgorithm algo(500, spec, 7);
  replay(inst.graph, inst.tau_tilde, algo);
  const auto labels = algo.finalize().labels;
  for (Label s : labels) CHECK(s == labels[0]);
}

TEST_CASE("large noise drives accuracy to 1/k") {
  const auto inst = sample(SymmetricParams{20000, 2, 7.5, 0.1, 0.0}, 8);
  SummaryAlgorithm algo(20000, neighbor_mean_spec(2, 100.0), 9);
  replay(inst.graph, inst.tau_tilde, algo);
  CHECK(accuracy(algo.finalize().labels, inst.tau, 2).accuracy < 0.52);
}

TEST_CASE("spec violations are reported") {
  auto spec = neighbor_mean_spec(2);
  spec.select = [](const StreamingGraph& graph, const NeighborhoodBall&) {
    RangeOfAction range;
    for (VertexId v : graph.arrival_order()) range.vertices.push_back(v);
    return range;
  };
  spec.radius = 0;
  SummaryAlgorithm far(3, spec, 1);
  far.insert(0, SideLabel{}, {});
  CHECK_THROWS_AS(far.insert(1, SideLabel{}, {}), SpecViolationError);

  auto big = neighbor_mean_spec(2);
  big.max_action = 1;
  big.select = [](const StreamingGraph& graph, const NeighborhoodBall& ball) {
    RangeOfAction range;
    range.vertices.push_back(ball.center());
    for (VertexId u : graph.neighbors(ball.center())) range.vertices.push_back(u);
    return range;
  };
  SummaryAlgorithm crowded(3, big, 1);
  crowded.insert(0, SideLabel{}, {});
  CHECK_THROWS_AS(crowded.insert(1, SideLabel{}, std::vector<VertexId>{0}), SpecViolationError);

  auto nan = neighbor_mean_spec(2);
  nan.vertex_update = [](const SummaryView&, std::size_t) {
    return Eigen::VectorXd::Constant(1, std::nan(""));
  };
  SummaryAlgorithm broken(2, nan, 1);
  CHECK_THROWS_AS(broken.insert(0, SideLabel{}, {}), NumericDomainError);

  CHECK_THROWS_AS(summary_spec_by_name("nope", 2, 0.1), ConfigError);
}

TEST_CASE("estimates depend only on the seed") {
  const auto inst = sample(SymmetricParams{1000, 3, 7.5, 0.1, 0.0}, 10);
  SummaryAlgorithm x(1000, neighbor_mean_spec(3), 11), y(1000, neighbor_mean_spec(3), 11);
  replay(inst.graph, inst.tau_tilde, x);
  replay(inst.graph, inst.tau_tilde, y);
  CHECK(x.finalize().labels == y.finalize().labels);
  for (Label s : x.finalize().labels) CHECK((s >= 0 && s < 3));
}

}
