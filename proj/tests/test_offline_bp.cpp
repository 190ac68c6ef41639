#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "streambp/error.hpp"
#include "streambp/model.hpp"
#include "streambp/offline_bp.hpp"

using namespace streambp;

namespace {

KernelParams make(double a, double b, double alpha, int k = 2, double eps = 0.0) {
  KernelParams p;
  p.a = a;
  p.b = b;
  p.alpha = alpha;
  p.k = k;
  p.eps = eps;
  return p;
}

}  // namespace

TEST_SUITE("offline_bp") {

TEST_CASE("radius one is the side information") {
  const auto inst = sample(SymmetricParams{2000, 3, 5.0, 0.5, 0.4}, 3);
  OfflineBpRun run(inst.graph, inst.tau_tilde, make(5, 0.5, 0.4, 3, 1e-6), 1);
  const auto est = run.run();
  CHECK(run.rounds_executed() == 0);
  CHECK(est.labels == inst.tau_tilde);
}

TEST_CASE("a = b reduces to the side information for every radius") {
  const auto inst = sample(SymmetricParams{2000, 2, 5.0, 0.5, 0.3}, 4);
  for (int radius : {1, 2, 5}) {
    const auto est = offline_bp_run(inst.graph, inst.tau_tilde, make(2, 2, 0.3, 2, 1e-6), radius);
    CHECK(est.labels == inst.tau_tilde);
  }
}

TEST_CASE("executes exactly R - 1 rounds") {
  const auto inst = sample(SymmetricParams{300, 2, 5.0, 0.5, 0.3}, 5);
  for (int radius = 1; radius <= 6; ++radius) {
    OfflineBpRun run(inst.graph, inst.tau_tilde, make(5, 0.5, 0.3), radius);
    run.run();
    CHECK(run.rounds_executed() == radius - 1);
    CHECK(run.messages_touched() == static_cast<std::uint64_t>((radius - 1) * 2 * inst.graph.num_edges()));
  }
}

TEST_CASE("trees: exact posterior with R >= diameter + 1") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 2 + rep % 11;
    const int k = rep % 5 == 0 ? 3 : 2;
    const auto edges = oracle::random_tree(n, gen);
    std::vector<int> side(n);
    for (int& s : side) s = static_cast<int>(gen() % k);
    const auto p = make(0.5 + 8 * unit(gen), 0.5 + 8 * unit(gen), 0.05 + 0.4 * unit(gen), k);
    const auto exact = oracle::posterior_marginals(n, k, edges, side, p.a, p.b, p.alpha);
    const auto g = oracle::stream(n, edges, oracle::random_order(n, gen));
    const std::vector<Label> labels(side.begin(), side.end());
    const auto est = offline_bp_run(g, labels, p, oracle::diameter(n, edges) + 1);
    CHECK((est.beliefs - exact).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("synchronous rounds do not depend on edge order") {
  const auto inst = sample(SymmetricParams{3000, 2, 5.0, 0.5, 0.3}, 6);
  const auto p = make(5, 0.5, 0.3, 2, 1e-6);
  OfflineBpRun natural(inst.graph, inst.tau_tilde, p, 5);
  OfflineBpRun shuffled(inst.graph, inst.tau_tilde, p, 5, {99});
  CHECK(natural.run().beliefs == shuffled.run().beliefs);
}

TEST_CASE("R-locality") {
  std::mt19937_64 gen(32);
  const int n = 150;
  const auto p = make(5, 1, 0.3, 2, 1e-6);
  for (int rep = 0; rep < 10; ++rep) {
    const auto edges = oracle::random_graph(n, 2.5 / n, gen);
    const auto g = oracle::stream(n, edges, oracle::random_order(n, gen));
    const int radius = 1 + rep % 3;
    std::vector<Label> side(n);
    for (auto& s : side) s = static_cast<Label>(gen() % 2);
    const auto base = offline_bp_run(g, side, p, radius);
    const int center = static_cast<int>(gen() % n);
    const auto dist = oracle::bfs(n, edges, center);
    for (int v = 0; v < n; ++v) {
      if (dist[v] < 0 || dist[v] > radius) side[v] = 1 - side[v];
    }
    const auto moved = offline_bp_run(g, side, p, radius);
    CHECK(moved.beliefs.col(center) == base.beliefs.col(center));
  }
}

TEST_CASE("accuracy grows with R") {
  const auto inst = sample(SymmetricParams{20000, 2, 5.0, 0.5, 0.3}, 7);
  const auto p = make(5, 0.5, 0.3, 2, 1e-6);
  double last = 0.0;
  for (int radius = 1; radius <= 6; ++radius) {
    const auto est = offline_bp_run(inst.graph, inst.tau_tilde, p, radius);
    long hits = 0;
    for (VertexId v = 0; v < 20000; ++v) hits += est.labels[v] == inst.tau[v];
    const double acc = static_cast<double>(hits) / 20000;
    CHECK(acc >= last - 0.01);
    last = acc;
  }
}

TEST_CASE("streaming adapter matches a direct run") {
  const auto inst = sample(SymmetricParams{1000, 2, 5.0, 0.5, 0.3}, 8);
  const auto p = make(5, 0.5, 0.3, 2, 1e-6);
  OfflineBp adapter(1000, p, 4);
  replay(inst.graph, inst.tau_tilde, adapter);
  CHECK(adapter.finalize().beliefs == offline_bp_run(inst.graph, inst.tau_tilde, p, 4).beliefs);
  CHECK(adapter.messages_touched() > 0);
}

TEST_CASE("errors") {
  StreamingGraph g(2);
  g.insert_vertex(0, {});
  g.insert_vertex(1, std::vector<VertexId>{0});
  const std::vector<Label> side{0, 1};
  CHECK_THROWS_AS(offline_bp_run(g, side, make(5, 1, 0.3), 0), ParameterError);
  CHECK_THROWS_AS(offline_bp_run(g, std::vector<Label>{0}, make(5, 1, 0.3), 2), InputError);
  CHECK_THROWS_AS(offline_bp_run(g, std::vector<Label>{0, 4}, make(5, 1, 0.3), 2), LabelError);
}

}
