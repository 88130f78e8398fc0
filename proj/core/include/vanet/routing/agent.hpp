#pragma once

// Uniform event interface between the engine and a node's routing state
// machine. Agents never touch the event queue or other nodes directly; every
// side effect is returned as an Action and carried out by the engine.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vanet/packet.hpp"
#include "vanet/routing/params.hpp"
#include "vanet/types.hpp"

namespace vanet::routing {

enum class DropCause {
  NoRoute,
  BufferOverflow,
  BufferTimeout,
  DiscoveryFailed,
  LinkBreak,
  TtlExpired,
  Loop,
};

inline constexpr DropCause kAllDropCauses[] = {
    DropCause::NoRoute,   DropCause::BufferOverflow, DropCause::BufferTimeout,
    DropCause::DiscoveryFailed, DropCause::LinkBreak, DropCause::TtlExpired,
    DropCause::Loop,
};

std::string to_string(DropCause cause);

enum class LinkBreakCause {
  Mobility,    ///< the engine saw the neighbour leave radio range
  MacFailure,  ///< a unicast to the neighbour was not received
};

/// Opaque timer identity; `kind` is protocol specific and `arg` usually names
/// a destination.
struct TimerTag {
  std::uint32_t kind = 0;
  std::uint64_t arg = 0;
};

struct Transmit {
  Packet packet;
  NodeId next_hop = kBroadcast;
};

struct Deliver {
  DataPacket packet;
};

struct Drop {
  DataPacket packet;
  DropCause cause;
};

struct ScheduleTimer {
  SimTime at;
  TimerTag tag;
};

using Action = std::variant<Transmit, Deliver, Drop, ScheduleTimer>;
using Actions = std::vector<Action>;

class RoutingAgent {
 public:
  explicit RoutingAgent(NodeId self) : self_(self) {}
  virtual ~RoutingAgent() = default;

  RoutingAgent(const RoutingAgent&) = delete;
  RoutingAgent& operator=(const RoutingAgent&) = delete;

  NodeId id() const { return self_; }

  /// Called once at time 0 to arm periodic timers.
  virtual void start(SimTime now, Actions& out) = 0;
  /// A locally generated data packet.
  virtual void on_data_origin(DataPacket pkt, SimTime now, Actions& out) = 0;
  /// A data packet received from a neighbour (relay or final hop).
  virtual void on_data(DataPacket pkt, NodeId from, SimTime now, Actions& out) = 0;
  virtual void on_control(const ControlPacket& pkt, NodeId from, SimTime now,
                          Actions& out) = 0;
  /// `failed` carries the unicast packet that could not be delivered, if any.
  virtual void on_link_break(NodeId neighbor, LinkBreakCause cause,
                             std::optional<Packet> failed, SimTime now, Actions& out) = 0;
  virtual void on_timer(const TimerTag& tag, SimTime now, Actions& out) = 0;

  /// Data packets currently held in protocol buffers.
  virtual std::size_t buffered_data() const = 0;
  virtual std::string timer_name(const TimerTag& tag) const = 0;

 protected:
  static void send(Actions& out, Packet pkt, NodeId next_hop) {
    out.push_back(Transmit{std::move(pkt), next_hop});
  }
  static void send(Actions& out, ControlPacket pkt, NodeId next_hop) {
    out.push_back(Transmit{Packet{std::move(pkt)}, next_hop});
  }
  static void send(Actions& out, DataPacket pkt, NodeId next_hop) {
    out.push_back(Transmit{Packet{std::move(pkt)}, next_hop});
  }
  static void deliver(Actions& out, DataPacket pkt) { out.push_back(Deliver{std::move(pkt)}); }
  static void drop(Actions& out, DataPacket pkt, DropCause cause) {
    out.push_back(Drop{std::move(pkt), cause});
  }
  static void schedule(Actions& out, SimTime at, TimerTag tag) {
    out.push_back(ScheduleTimer{at, tag});
  }

  NodeId self_;
};

std::unique_ptr<RoutingAgent> make_agent(NodeId self, const ProtocolParams& params);

}  // namespace vanet::routing
