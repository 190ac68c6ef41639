#include "streambp/algorithm.hpp"

#include "streambp/error.hpp"

namespace streambp {

void replay(const StreamingGraph& graph, std::span<const Label> side,
            StreamingAlgorithm& algorithm, const std::function<void(Step)>& on_step) {
  if (side.size() != static_cast<std::size_t>(graph.capacity())) {
    throw InputError("replay: side labels must cover every vertex id");
  }
  std::vector<VertexId> earlier;
  for (Step t = 1; t <= graph.current_step(); ++t) {
    const VertexId v = graph.vertex_at(t);
    earlier.clear();
    for (VertexId u : graph.neighbors(v)) {
      if (graph.arrival_step(u) < t) earlier.push_back(u);
    }
    const SideLabel label = side[v] >= 0 ? SideLabel(side[v]) : SideLabel{};
    algorithm.insert(v, label, earlier);
    if (on_step) on_step(t);
  }
}

}  // namespace streambp
