#pragma once

// Ad hoc On-demand Distance Vector routing: expanding-ring route discovery,
// destination sequence numbers, hello-based neighbour sensing and local link
// repair.
//
// Two deliberate departures from RFC 3561:
//  * A RREQ's ttl counts the rebroadcasts still allowed, so ttl_start = 1
//    reaches nodes two hops away.
//  * Intermediate nodes only answer requests that carry a known destination
//    sequence number; the first discovery toward a destination is always
//    answered by the destination itself.

#include <deque>
#include <map>
#include <set>
#include <utility>

#include "vanet/routing/agent.hpp"

namespace vanet::routing {

class AodvAgent final : public RoutingAgent {
 public:
  static constexpr double kActiveRouteTimeout = 3.0;
  static constexpr double kNodeTraversalTime = 0.04;
  static constexpr int kRreqRetries = 2;
  static constexpr int kTimeoutBuffer = 2;
  static constexpr std::uint32_t kLocalAddTtl = 2;
  static constexpr std::size_t kBufferCapacity = 64;

  struct Route {
    NodeId next_hop = 0;
    std::uint32_t hops = 0;
    std::uint32_t seq = 0;
    bool valid_seq = false;
    bool valid = false;
    SimTime expiry = 0.0;
    std::set<NodeId> precursors;

    bool usable(SimTime now) const { return valid && expiry > now; }
  };

  AodvAgent(NodeId self, AodvParams params);

  void start(SimTime now, Actions& out) override;
  void on_data_origin(DataPacket pkt, SimTime now, Actions& out) override;
  void on_data(DataPacket pkt, NodeId from, SimTime now, Actions& out) override;
  void on_control(const ControlPacket& pkt, NodeId from, SimTime now, Actions& out) override;
  void on_link_break(NodeId neighbor, LinkBreakCause cause, std::optional<Packet> failed,
                     SimTime now, Actions& out) override;
  void on_timer(const TimerTag& tag, SimTime now, Actions& out) override;
  std::size_t buffered_data() const override { return buffer_.size(); }
  std::string timer_name(const TimerTag& tag) const override;

  const std::map<NodeId, Route>& routes() const { return routes_; }
  std::uint32_t own_seq() const { return own_seq_; }
  bool discovering(NodeId dest) const { return pending_.count(dest) != 0; }
  const AodvParams& params() const { return params_; }

 private:
  enum TimerKind : std::uint32_t { kHelloTimer = 1, kDiscoveryTimer = 2, kRepairTimer = 3 };

  struct Discovery {
    std::uint32_t ttl = 0;
    int retries = 0;
    std::uint64_t generation = 0;
    bool local_repair = false;
  };

  void handle(const ctl::Rreq& rreq, NodeId from, SimTime now, Actions& out);
  void handle(const ctl::Rrep& rrep, NodeId from, SimTime now, Actions& out);
  void handle(const ctl::Rerr& rerr, NodeId from, SimTime now, Actions& out);

  void touch_neighbor(NodeId n, SimTime now);
  bool update_route(NodeId dest, NodeId next_hop, std::uint32_t hops, std::uint32_t seq,
                    SimTime now, SimTime until);
  void forward(DataPacket pkt, std::optional<NodeId> from, SimTime now, Actions& out);
  void buffer(DataPacket pkt, Actions& out);
  void flush(NodeId dest, SimTime now, Actions& out);
  void drop_buffered(NodeId dest, DropCause cause, Actions& out);
  void start_discovery(NodeId dest, SimTime now, Actions& out);
  void start_local_repair(NodeId dest, SimTime now, Actions& out);
  void send_rreq(NodeId dest, Discovery& d, SimTime now, Actions& out);
  void on_discovery_timeout(NodeId dest, SimTime now, Actions& out);
  void on_repair_timeout(NodeId dest, SimTime now, Actions& out);
  void lose_neighbor(NodeId n, std::optional<Packet> failed, SimTime now, Actions& out);
  void send_rerr(std::vector<std::pair<NodeId, std::uint32_t>> unreachable, Actions& out);

  double ring_traversal_time(std::uint32_t ttl) const;
  double net_traversal_time() const;
  std::uint32_t max_repair_hops() const;
  double neighbor_lifetime() const;

  AodvParams params_;
  std::uint32_t own_seq_ = 1;
  std::uint32_t rreq_id_ = 0;
  std::uint64_t generation_ = 0;
  std::map<NodeId, Route> routes_;
  std::map<NodeId, SimTime> neighbors_;
  std::map<std::pair<NodeId, std::uint32_t>, SimTime> seen_rreq_;
  std::map<NodeId, Discovery> pending_;
  std::deque<DataPacket> buffer_;
};

}  // namespace vanet::routing
