#pragma once

// Fisheye State Routing. Every node keeps a full topology table and
// exchanges it with its one-hop neighbours only: entries within
// inner_scope_hops every inner_interval, the whole table every
// outer_interval. Routes are shortest hop paths over the table.

#include <map>
#include <vector>

#include "vanet/routing/agent.hpp"

namespace vanet::routing {

class FsrAgent final : public RoutingAgent {
 public:
  struct Entry {
    std::uint32_t seq = 0;
    std::vector<NodeId> neighbors;  ///< sorted
    SimTime updated = 0.0;
  };

  FsrAgent(NodeId self, FsrParams params);

  void start(SimTime now, Actions& out) override;
  void on_data_origin(DataPacket pkt, SimTime now, Actions& out) override;
  void on_data(DataPacket pkt, NodeId from, SimTime now, Actions& out) override;
  void on_control(const ControlPacket& pkt, NodeId from, SimTime now, Actions& out) override;
  void on_link_break(NodeId neighbor, LinkBreakCause cause, std::optional<Packet> failed,
                     SimTime now, Actions& out) override;
  void on_timer(const TimerTag& tag, SimTime now, Actions& out) override;
  std::size_t buffered_data() const override { return 0; }
  std::string timer_name(const TimerTag& tag) const override;

  const std::map<NodeId, Entry>& table() const { return table_; }
  /// Hop distance of every reachable node, self included at 0.
  std::map<NodeId, std::uint32_t> distances() const;
  std::optional<NodeId> next_hop(NodeId dest) const;
  const FsrParams& params() const { return params_; }

 private:
  enum TimerKind : std::uint32_t { kInnerTimer = 1, kOuterTimer = 2 };

  struct Routes {
    std::map<NodeId, std::uint32_t> dist;
    std::map<NodeId, NodeId> first_hop;
  };

  const Routes& routes() const;
  void set_neighbors(std::vector<NodeId> nbrs, SimTime now);
  void expire(SimTime now);
  ctl::LsuEntry entry_of(NodeId origin) const;
  void route(DataPacket pkt, DropCause miss, Actions& out);

  FsrParams params_;
  std::map<NodeId, Entry> table_;
  std::map<NodeId, SimTime> heard_;
  mutable std::optional<Routes> routes_;
};

}  // namespace vanet::routing
