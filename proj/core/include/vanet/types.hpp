#pragma once

#include <cstdint>
#include <limits>

namespace vanet {

using NodeId = std::uint32_t;

inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

/// Simulation time in seconds.
using SimTime = double;

}  // namespace vanet
