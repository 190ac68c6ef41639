#pragma once

#include <cstdint>
#include <optional>

namespace streambp {

// Dense vertex index in [0, capacity).
using VertexId = std::int32_t;
// Undirected edge index, assigned in insertion order.
using EdgeId = std::int64_t;
// Arrival step. The first revealed vertex arrives at step 1; 0 means "not yet arrived".
using Step = std::int64_t;
// Community label, 0-based in [0, k).
using Label = std::int32_t;

inline constexpr Label kUnassigned = -1;

using SideLabel = std::optional<Label>;

}  // namespace streambp
