#include "streambp/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "streambp/error.hpp"

namespace streambp {

std::vector<int> hungarian_max_assignment(const Eigen::MatrixXd& weights) {
  const int n = static_cast<int>(weights.rows());
  if (weights.cols() != n) throw InputError("assignment needs a square weight matrix");
  if (n == 0) return {};
  const Eigen::MatrixXd cost = weights.maxCoeff() - weights.array();

  // Shortest augmenting path with potentials, 1-based with a dummy slot 0.
  // True labels are added one at a time; slots j are estimated labels and
  // row_of[j] is the true label currently matched to slot j.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> row_of(n + 1, 0), way(n + 1, 0);
  for (int col = 1; col <= n; ++col) {
    row_of[0] = col;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int c0 = row_of[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(j - 1, c0 - 1) - u[c0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(n);
  for (int i = 1; i <= n; ++i) perm[row_of[i] - 1] = i - 1;
  return perm;
}

std::vector<int> brute_force_max_assignment(const Eigen::MatrixXd& weights) {
  const int n = static_cast<int>(weights.rows());
  if (weights.cols() != n) throw InputError("assignment needs a square weight matrix");
  std::vector<int> perm(n), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_score = -std::numeric_limits<double>::infinity();
  do {
    double score = 0.0;
    for (int j = 0; j < n; ++j) score += weights(perm[j], j);
    if (score > best_score) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

AccuracyReport score(const Eigen::MatrixXi& confusion, std::size_t count) {
  const int k = static_cast<int>(confusion.rows());
  const Eigen::MatrixXd weights = confusion.cast<double>();
  const std::vector<int> perm =
      k <= 8 ? brute_force_max_assignment(weights) : hungarian_max_assignment(weights);
  AccuracyReport report;
  report.confusion = confusion;
  report.count = count;
  report.best_permutation.assign(perm.begin(), perm.end());
  long long hits = 0;
  for (int j = 0; j < k; ++j) hits += confusion(perm[j], j);
  report.accuracy = count > 0 ? static_cast<double>(hits) / static_cast<double>(count) : 0.0;
  return report;
}

void tally(Eigen::MatrixXi& confusion, Label est, Label truth, int k) {
  if (est < 0 || est >= k) throw LabelError("estimated label " + std::to_string(est) + " out of range");
  if (truth < 0 || truth >= k) throw LabelError("true label " + std::to_string(truth) + " out of range");
  ++confusion(est, truth);
}

}  // namespace

AccuracyReport accuracy(std::span<const Label> estimates, std::span<const Label> truth, int k) {
  if (k < 1) throw ParameterError("accuracy: k must be positive");
  if (estimates.size() != truth.size()) throw InputError("accuracy: length mismatch");
  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t v = 0; v < truth.size(); ++v) tally(confusion, estimates[v], truth[v], k);
  return score(confusion, truth.size());
}

AccuracyReport accuracy(std::span<const Label> estimates, std::span<const Label> truth, int k,
                        std::span<const VertexId> vertices) {
  if (k < 1) throw ParameterError("accuracy: k must be positive");
  if (estimates.size() != truth.size()) throw InputError("accuracy: length mismatch");
  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(k, k);
  for (VertexId v : vertices) {
    if (v < 0 || static_cast<std::size_t>(v) >= truth.size()) {
      throw InputError("accuracy: vertex id out of range");
    }
    tally(confusion, estimates[v], truth[v], k);
  }
  return score(confusion, vertices.size());
}

std::vector<TracePoint> accuracy_trace(StreamingAlgorithm& algorithm, const StreamingGraph& graph,
                                       std::span<const Label> side, std::span<const Label> truth,
                                       int k, std::span<const Step> checkpoints) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw InputError("accuracy_trace: checkpoints must be sorted");
  }
  if (!checkpoints.empty() && (checkpoints.front() < 1 || checkpoints.back() > graph.current_step())) {
    throw InputError("accuracy_trace: checkpoint outside [1, n]");
  }
  std::vector<TracePoint> trace;
  std::size_t next = 0;
  replay(graph, side, algorithm, [&](Step t) {
    while (next < checkpoints.size() && checkpoints[next] == t) {
      const Estimates est = algorithm.finalize();
      const auto revealed = algorithm.graph().arrival_order();
      trace.push_back({t, accuracy(est.labels, truth, k, revealed).accuracy});
      ++next;
    }
  });
  return trace;
}

}  // namespace streambp
