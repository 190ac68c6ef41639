#include "streambp/voting.hpp"

#include <algorithm>

#include "streambp/error.hpp"
#include "streambp/kernel.hpp"

namespace streambp {

Voting::Voting(VertexId capacity, int k, int weight)
    : graph_(capacity), k_(k), weight_(weight), estimates_(capacity, kUnassigned), scores_(k) {
  if (k < 1) throw ParameterError("voting: k must be at least 1");
  if (weight < 1) throw ParameterError("voting: side-information weight must be positive");
}

void Voting::insert(VertexId v, SideLabel side, std::span<const VertexId> earlier) {
  check_side_label(side, k_);
  graph_.insert_vertex(v, earlier);

  std::fill(scores_.begin(), scores_.end(), 0);
  if (side) scores_[*side] += weight_;
  for (VertexId u : earlier) scores_[estimates_[u]] += 1;

  const long best = *std::max_element(scores_.begin(), scores_.end());
  Label winner;
  if (side && scores_[*side] == best) {
    winner = *side;
  } else {
    winner = static_cast<Label>(std::find(scores_.begin(), scores_.end(), best) - scores_.begin());
  }
  estimates_[v] = winner;
}

Estimates Voting::finalize() const {
  Estimates out;
  out.labels = estimates_;
  return out;
}

}  // namespace streambp
