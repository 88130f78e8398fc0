#pragma once

// Dynamic Source Routing with a bounded path cache, a bounded send buffer,
// route reversal at the target and cache replies (GRAT_RREP) from
// intermediate nodes. Links are assumed bidirectional, so every overheard
// route is also learned in reverse.

#include <deque>
#include <map>
#include <set>
#include <utility>

#include "vanet/routing/agent.hpp"

namespace vanet::routing {

class DsrAgent final : public RoutingAgent {
 public:
  static constexpr double kInitialDiscoveryTimeout = 0.5;
  static constexpr double kMaxDiscoveryTimeout = 10.0;
  static constexpr double kSendBufferTimeout = 30.0;
  static constexpr std::uint32_t kMaxSalvage = 15;

  using Path = std::vector<NodeId>;

  DsrAgent(NodeId self, DsrParams params);

  void start(SimTime now, Actions& out) override;
  void on_data_origin(DataPacket pkt, SimTime now, Actions& out) override;
  void on_data(DataPacket pkt, NodeId from, SimTime now, Actions& out) override;
  void on_control(const ControlPacket& pkt, NodeId from, SimTime now, Actions& out) override;
  void on_link_break(NodeId neighbor, LinkBreakCause cause, std::optional<Packet> failed,
                     SimTime now, Actions& out) override;
  void on_timer(const TimerTag& tag, SimTime now, Actions& out) override;
  std::size_t buffered_data() const override { return buffer_.size(); }
  std::string timer_name(const TimerTag& tag) const override;

  /// Cached paths, oldest first; each starts at this node.
  const std::deque<Path>& cache() const { return cache_; }
  /// Shortest cached path to `dest`, most recent on ties.
  std::optional<Path> lookup(NodeId dest, const std::set<NodeId>& avoid = {}) const;
  void add_path(Path path);
  void purge_link(NodeId a, NodeId b);
  const DsrParams& params() const { return params_; }

 private:
  enum TimerKind : std::uint32_t { kDiscoveryTimer = 1, kBufferTimer = 2 };

  struct Buffered {
    DataPacket packet;
    SimTime enqueued;
  };
  struct Discovery {
    double timeout = kInitialDiscoveryTimeout;
    std::uint64_t generation = 0;
  };

  void handle(const ctl::DsrRreq& rreq, SimTime now, Actions& out);
  void handle_reply(const ControlPacket& pkt, const Path& route, const Path& reply_path,
                    SimTime now, Actions& out);
  void handle(const ctl::DsrRerr& rerr, Actions& out);

  void learn(const Path& route);
  void route_or_buffer(DataPacket pkt, SimTime now, Actions& out);
  void flush(SimTime now, Actions& out);
  void send_discovery(NodeId dest, SimTime now, Actions& out);
  void salvage_or_report(DataPacket pkt, NodeId broken, SimTime now, Actions& out);
  bool has_buffered_for(NodeId dest) const;

  DsrParams params_;
  std::uint32_t rreq_id_ = 0;
  std::uint64_t generation_ = 0;
  std::deque<Path> cache_;
  std::deque<Buffered> buffer_;
  std::set<std::pair<NodeId, std::uint32_t>> seen_;
  std::map<NodeId, Discovery> pending_;
  /// Replies waiting for a route back to their origin (route reversal off).
  std::map<NodeId, std::vector<Path>> held_replies_;
};

}  // namespace vanet::routing
