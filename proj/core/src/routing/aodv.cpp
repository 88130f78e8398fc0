#include "vanet/routing/aodv.hpp"

#include <algorithm>
#include <cmath>

namespace vanet::routing {
namespace {

std::uint64_t pack(NodeId dest, std::uint64_t generation) {
  return static_cast<std::uint64_t>(dest) | (generation << 32);
}

NodeId unpack_dest(std::uint64_t arg) { return static_cast<NodeId>(arg & 0xffffffffULL); }
std::uint64_t unpack_generation(std::uint64_t arg) { return arg >> 32; }

}  // namespace

AodvAgent::AodvAgent(NodeId self, AodvParams params) : RoutingAgent(self), params_(params) {}

double AodvAgent::ring_traversal_time(std::uint32_t ttl) const {
  return 2.0 * kNodeTraversalTime * static_cast<double>(ttl + kTimeoutBuffer);
}

double AodvAgent::net_traversal_time() const {
  return 2.0 * kNodeTraversalTime * params_.net_diameter;
}

std::uint32_t AodvAgent::max_repair_hops() const {
  return static_cast<std::uint32_t>(std::floor(0.3 * params_.net_diameter));
}

double AodvAgent::neighbor_lifetime() const {
  return params_.allowed_hello_loss * params_.hello_interval;
}

void AodvAgent::start(SimTime now, Actions& out) { schedule(out, now, {kHelloTimer, 0}); }

std::string AodvAgent::timer_name(const TimerTag& tag) const {
  switch (tag.kind) {
    case kHelloTimer: return "HELLO";
    case kDiscoveryTimer: return "DISCOVERY:" + std::to_string(unpack_dest(tag.arg));
    case kRepairTimer: return "REPAIR:" + std::to_string(unpack_dest(tag.arg));
    default: return "UNKNOWN";
  }
}

void AodvAgent::touch_neighbor(NodeId n, SimTime now) {
  neighbors_[n] = now;
  Route& r = routes_[n];
  if (!r.usable(now) || r.hops != 1) {
    r.next_hop = n;
    r.hops = 1;
    r.valid = true;
  }
  r.expiry = std::max(r.expiry, now + neighbor_lifetime());
}

bool AodvAgent::update_route(NodeId dest, NodeId next_hop, std::uint32_t hops,
                             std::uint32_t seq, SimTime now, SimTime until) {
  auto it = routes_.find(dest);
  if (it != routes_.end()) {
    const Route& r = it->second;
    const bool fresher = !r.valid_seq || seq > r.seq;
    const bool shorter = seq == r.seq && (!r.usable(now) || hops < r.hops);
    if (!fresher && !shorter) return false;
  }
  Route& r = routes_[dest];
  r.next_hop = next_hop;
  r.hops = hops;
  r.seq = std::max(r.seq, seq);
  r.valid_seq = true;
  r.valid = true;
  r.expiry = until;
  return true;
}

void AodvAgent::on_data_origin(DataPacket pkt, SimTime now, Actions& out) {
  forward(std::move(pkt), std::nullopt, now, out);
}

void AodvAgent::on_data(DataPacket pkt, NodeId from, SimTime now, Actions& out) {
  touch_neighbor(from, now);
  if (pkt.dest == self_) {
    deliver(out, std::move(pkt));
    return;
  }
  forward(std::move(pkt), from, now, out);
}

void AodvAgent::forward(DataPacket pkt, std::optional<NodeId> from, SimTime now,
                        Actions& out) {
  const NodeId dest = pkt.dest;
  auto it = routes_.find(dest);
  if (it != routes_.end() && it->second.usable(now)) {
    Route& r = it->second;
    r.expiry = std::max(r.expiry, now + kActiveRouteTimeout);
    if (from) r.precursors.insert(*from);
    send(out, std::move(pkt), r.next_hop);
    return;
  }
  if (!from) {
    buffer(std::move(pkt), out);
    if (!pending_.count(dest)) start_discovery(dest, now, out);
    return;
  }
  // Relay without an active route.
  const bool repairable = params_.enable_llr && it != routes_.end() && it->second.valid_seq &&
                          it->second.hops <= max_repair_hops();
  if (repairable) {
    it->second.precursors.insert(*from);
    buffer(std::move(pkt), out);
    if (!pending_.count(dest)) start_local_repair(dest, now, out);
    return;
  }
  const std::uint32_t seq = it != routes_.end() ? it->second.seq : 0;
  drop(out, std::move(pkt), DropCause::NoRoute);
  send_rerr({{dest, seq}}, out);
}

void AodvAgent::buffer(DataPacket pkt, Actions& out) {
  if (buffer_.size() >= kBufferCapacity) {
    drop(out, std::move(buffer_.front()), DropCause::BufferOverflow);
    buffer_.pop_front();
  }
  buffer_.push_back(std::move(pkt));
}

void AodvAgent::flush(NodeId dest, SimTime now, Actions& out) {
  std::deque<DataPacket> keep;
  std::vector<DataPacket> ready;
  for (auto& p : buffer_) {
    (p.dest == dest ? ready.emplace_back(std::move(p)) : keep.emplace_back(std::move(p)));
  }
  buffer_ = std::move(keep);
  for (auto& p : ready) forward(std::move(p), std::nullopt, now, out);
}

void AodvAgent::drop_buffered(NodeId dest, DropCause cause, Actions& out) {
  std::deque<DataPacket> keep;
  for (auto& p : buffer_) {
    if (p.dest == dest) {
      drop(out, std::move(p), cause);
    } else {
      keep.push_back(std::move(p));
    }
  }
  buffer_ = std::move(keep);
}

void AodvAgent::start_discovery(NodeId dest, SimTime now, Actions& out) {
  Discovery d;
  d.ttl = static_cast<std::uint32_t>(params_.ttl_start);
  d.generation = ++generation_;
  auto [it, inserted] = pending_.insert_or_assign(dest, d);
  send_rreq(dest, it->second, now, out);
  schedule(out, now + ring_traversal_time(d.ttl), {kDiscoveryTimer, pack(dest, d.generation)});
}

void AodvAgent::start_local_repair(NodeId dest, SimTime now, Actions& out) {
  const Route& r = routes_.at(dest);
  Discovery d;
  d.ttl = std::min<std::uint32_t>(static_cast<std::uint32_t>(params_.net_diameter),
                                  std::max<std::uint32_t>(1, r.hops) + kLocalAddTtl - 1);
  d.generation = ++generation_;
  d.local_repair = true;
  auto [it, inserted] = pending_.insert_or_assign(dest, d);
  send_rreq(dest, it->second, now, out);
  schedule(out, now + ring_traversal_time(d.ttl), {kRepairTimer, pack(dest, d.generation)});
}

void AodvAgent::send_rreq(NodeId dest, Discovery& d, SimTime now, Actions& out) {
  ctl::Rreq rreq;
  rreq.origin = self_;
  rreq.dest = dest;
  rreq.id = ++rreq_id_;
  rreq.ttl = d.ttl;
  rreq.origin_seq = ++own_seq_;
  auto it = routes_.find(dest);
  if (it != routes_.end() && it->second.valid_seq) {
    rreq.dest_seq = it->second.seq;
    rreq.dest_seq_unknown = false;
  }
  seen_rreq_[{self_, rreq.id}] = now;
  send(out, ControlPacket{rreq}, kBroadcast);
}

void AodvAgent::on_discovery_timeout(NodeId dest, SimTime now, Actions& out) {
  auto it = routes_.find(dest);
  if (it != routes_.end() && it->second.usable(now)) {
    pending_.erase(dest);
    flush(dest, now, out);
    return;
  }
  Discovery& d = pending_.at(dest);
  const auto diameter = static_cast<std::uint32_t>(params_.net_diameter);
  double wait = 0.0;
  if (d.ttl < diameter) {
    d.ttl += static_cast<std::uint32_t>(params_.ttl_increment);
    if (d.ttl > static_cast<std::uint32_t>(params_.ttl_threshold)) d.ttl = diameter;
    wait = d.ttl < diameter ? ring_traversal_time(d.ttl) : net_traversal_time();
  } else {
    if (++d.retries > kRreqRetries) {
      pending_.erase(dest);
      drop_buffered(dest, DropCause::DiscoveryFailed, out);
      return;
    }
    // Binary exponential backoff at full diameter.
    wait = net_traversal_time() * static_cast<double>(1 << d.retries);
  }
  d.generation = ++generation_;
  send_rreq(dest, d, now, out);
  schedule(out, now + wait, {kDiscoveryTimer, pack(dest, d.generation)});
}

void AodvAgent::on_repair_timeout(NodeId dest, SimTime now, Actions& out) {
  pending_.erase(dest);
  auto it = routes_.find(dest);
  if (it != routes_.end() && it->second.usable(now)) {
    flush(dest, now, out);
    return;
  }
  drop_buffered(dest, DropCause::LinkBreak, out);
  if (it != routes_.end() && !it->second.precursors.empty()) {
    it->second.precursors.clear();
    send_rerr({{dest, it->second.seq}}, out);
  }
}

void AodvAgent::on_control(const ControlPacket& pkt, NodeId from, SimTime now, Actions& out) {
  if (std::holds_alternative<ctl::Hello>(pkt)) {
    touch_neighbor(from, now);
  } else if (const auto* rreq = std::get_if<ctl::Rreq>(&pkt)) {
    handle(*rreq, from, now, out);
  } else if (const auto* rrep = std::get_if<ctl::Rrep>(&pkt)) {
    handle(*rrep, from, now, out);
  } else if (const auto* rerr = std::get_if<ctl::Rerr>(&pkt)) {
    handle(*rerr, from, now, out);
  }
}

void AodvAgent::handle(const ctl::Rreq& rreq, NodeId from, SimTime now, Actions& out) {
  touch_neighbor(from, now);
  if (rreq.origin == self_) return;
  const auto key = std::make_pair(rreq.origin, rreq.id);
  if (seen_rreq_.count(key)) return;
  seen_rreq_[key] = now;

  const std::uint32_t hops_to_origin = rreq.hop_count + 1;
  update_route(rreq.origin, from, hops_to_origin, rreq.origin_seq, now,
               now + kActiveRouteTimeout);
  Route& reverse = routes_.at(rreq.origin);
  if (reverse.next_hop == from) {
    reverse.expiry = std::max(reverse.expiry, now + kActiveRouteTimeout);
  }

  if (rreq.dest == self_) {
    if (!rreq.dest_seq_unknown) own_seq_ = std::max(own_seq_, rreq.dest_seq);
    ctl::Rrep rrep{rreq.origin, self_, 0, own_seq_, 2.0 * kActiveRouteTimeout};
    send(out, ControlPacket{rrep}, routes_.at(rreq.origin).next_hop);
    return;
  }

  auto it = routes_.find(rreq.dest);
  if (it != routes_.end() && it->second.usable(now) && it->second.valid_seq &&
      !rreq.dest_seq_unknown && it->second.seq >= rreq.dest_seq && it->second.next_hop != from) {
    Route& fwd = it->second;
    ctl::Rrep rrep{rreq.origin, rreq.dest, fwd.hops, fwd.seq, fwd.expiry - now};
    fwd.precursors.insert(from);
    routes_.at(rreq.origin).precursors.insert(fwd.next_hop);
    send(out, ControlPacket{rrep}, from);
    return;
  }

  if (rreq.ttl >= 1) {
    ctl::Rreq relay = rreq;
    relay.hop_count += 1;
    relay.ttl -= 1;
    send(out, ControlPacket{relay}, kBroadcast);
  }
}

void AodvAgent::handle(const ctl::Rrep& rrep, NodeId from, SimTime now, Actions& out) {
  touch_neighbor(from, now);
  if (rrep.dest == self_) return;
  const bool updated =
      update_route(rrep.dest, from, rrep.hop_count + 1, rrep.dest_seq, now, now + rrep.lifetime);
  if (rrep.origin == self_) {
    auto p = pending_.find(rrep.dest);
    if (p != pending_.end() && routes_.at(rrep.dest).usable(now)) {
      pending_.erase(p);
      flush(rrep.dest, now, out);
    }
    return;
  }
  if (!updated) return;
  auto back = routes_.find(rrep.origin);
  if (back == routes_.end() || !back->second.usable(now)) return;
  routes_.at(rrep.dest).precursors.insert(back->second.next_hop);
  back->second.precursors.insert(from);
  ctl::Rrep relay = rrep;
  relay.hop_count += 1;
  send(out, ControlPacket{relay}, back->second.next_hop);
}

void AodvAgent::handle(const ctl::Rerr& rerr, NodeId from, SimTime now, Actions& out) {
  touch_neighbor(from, now);
  std::vector<std::pair<NodeId, std::uint32_t>> propagate;
  for (const auto& [dest, seq] : rerr.unreachable) {
    auto it = routes_.find(dest);
    if (it == routes_.end() || !it->second.valid || it->second.next_hop != from) continue;
    Route& r = it->second;
    r.valid = false;
    r.seq = std::max(r.seq, seq);
    if (!r.precursors.empty()) {
      r.precursors.clear();
      propagate.emplace_back(dest, r.seq);
    }
  }
  if (!propagate.empty()) send_rerr(std::move(propagate), out);
}

void AodvAgent::send_rerr(std::vector<std::pair<NodeId, std::uint32_t>> unreachable,
                          Actions& out) {
  if (unreachable.empty()) return;
  send(out, ControlPacket{ctl::Rerr{std::move(unreachable)}}, kBroadcast);
}

void AodvAgent::on_link_break(NodeId neighbor, LinkBreakCause /*cause*/,
                              std::optional<Packet> failed, SimTime now, Actions& out) {
  lose_neighbor(neighbor, std::move(failed), now, out);
}

void AodvAgent::lose_neighbor(NodeId n, std::optional<Packet> failed, SimTime now,
                              Actions& out) {
  neighbors_.erase(n);
  std::optional<DataPacket> failed_data;
  if (failed && failed->is_data()) failed_data = std::move(failed->data());

  std::vector<std::pair<NodeId, std::uint32_t>> rerr;
  for (auto& [dest, r] : routes_) {
    if (!r.valid || r.next_hop != n) continue;
    r.valid = false;
    if (r.valid_seq) ++r.seq;
    if (failed_data && failed_data->dest == dest) continue;
    if (r.precursors.empty() || pending_.count(dest)) continue;
    if (params_.enable_llr && r.valid_seq && r.hops <= max_repair_hops()) {
      start_local_repair(dest, now, out);
    } else {
      r.precursors.clear();
      rerr.emplace_back(dest, r.seq);
    }
  }

  if (failed_data) {
    const NodeId dest = failed_data->dest;
    auto it = routes_.find(dest);
    if (failed_data->origin == self_) {
      buffer(std::move(*failed_data), out);
      if (!pending_.count(dest)) start_discovery(dest, now, out);
    } else if (params_.enable_llr && it != routes_.end() && it->second.valid_seq &&
               it->second.hops <= max_repair_hops()) {
      buffer(std::move(*failed_data), out);
      if (!pending_.count(dest)) start_local_repair(dest, now, out);
    } else {
      drop(out, std::move(*failed_data), DropCause::LinkBreak);
      if (it != routes_.end()) {
        it->second.precursors.clear();
        rerr.emplace_back(dest, it->second.seq);
      }
    }
  }
  send_rerr(std::move(rerr), out);
}

void AodvAgent::on_timer(const TimerTag& tag, SimTime now, Actions& out) {
  switch (tag.kind) {
    case kHelloTimer: {
      send(out, ControlPacket{ctl::Hello{}}, kBroadcast);
      schedule(out, now + params_.hello_interval, {kHelloTimer, 0});
      std::vector<NodeId> lost;
      for (const auto& [n, heard] : neighbors_) {
        if (heard + neighbor_lifetime() < now) lost.push_back(n);
      }
      for (NodeId n : lost) lose_neighbor(n, std::nullopt, now, out);
      for (auto& [dest, r] : routes_) {
        if (r.valid && r.expiry <= now) r.valid = false;
      }
      std::erase_if(seen_rreq_, [&](const auto& kv) {
        return kv.second + 2.0 * net_traversal_time() < now;
      });
      break;
    }
    case kDiscoveryTimer:
    case kRepairTimer: {
      const NodeId dest = unpack_dest(tag.arg);
      auto it = pending_.find(dest);
      if (it == pending_.end() || it->second.generation != unpack_generation(tag.arg)) return;
      if (tag.kind == kDiscoveryTimer) {
        on_discovery_timeout(dest, now, out);
      } else {
        on_repair_timeout(dest, now, out);
      }
      break;
    }
    default: break;
  }
}

}  // namespace vanet::routing
