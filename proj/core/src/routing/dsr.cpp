#include "vanet/routing/dsr.hpp"

#include <algorithm>

namespace vanet::routing {
namespace {

std::uint64_t pack(NodeId dest, std::uint64_t generation) {
  return static_cast<std::uint64_t>(dest) | (generation << 32);
}

std::ptrdiff_t index_of(const std::vector<NodeId>& v, NodeId n) {
  auto it = std::find(v.begin(), v.end(), n);
  return it == v.end() ? -1 : it - v.begin();
}

}  // namespace

DsrAgent::DsrAgent(NodeId self, DsrParams params) : RoutingAgent(self), params_(params) {}

void DsrAgent::start(SimTime /*now*/, Actions& /*out*/) {}

std::string DsrAgent::timer_name(const TimerTag& tag) const {
  switch (tag.kind) {
    case kDiscoveryTimer:
      return "DISCOVERY:" + std::to_string(static_cast<NodeId>(tag.arg & 0xffffffffULL));
    case kBufferTimer: return "SEND_BUFFER";
    default: return "UNKNOWN";
  }
}

// --- cache ---

void DsrAgent::add_path(Path path) {
  if (path.size() < 2 || path.front() != self_) return;
  auto same = std::find(cache_.begin(), cache_.end(), path);
  if (same != cache_.end()) cache_.erase(same);
  cache_.push_back(std::move(path));
  while (cache_.size() > params_.cache_capacity) cache_.pop_front();
}

std::optional<DsrAgent::Path> DsrAgent::lookup(NodeId dest,
                                               const std::set<NodeId>& avoid) const {
  std::optional<Path> best;
  for (const Path& p : cache_) {
    const auto pos = index_of(p, dest);
    if (pos <= 0) continue;
    const bool blocked = std::any_of(p.begin() + 1, p.begin() + pos + 1,
                                     [&](NodeId n) { return avoid.count(n) != 0; });
    if (blocked) continue;
    // Later entries are newer, so `<=` lets recency win ties.
    if (!best || static_cast<std::size_t>(pos + 1) <= best->size()) {
      best = Path(p.begin(), p.begin() + pos + 1);
    }
  }
  return best;
}

void DsrAgent::purge_link(NodeId a, NodeId b) {
  std::deque<Path> kept;
  for (Path& p : cache_) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if ((p[i] == a && p[i + 1] == b) || (p[i] == b && p[i + 1] == a)) {
        p.resize(i + 1);
        break;
      }
    }
    if (p.size() >= 2 && std::find(kept.begin(), kept.end(), p) == kept.end()) {
      kept.push_back(std::move(p));
    }
  }
  cache_ = std::move(kept);
}

void DsrAgent::learn(const Path& route) {
  const auto pos = index_of(route, self_);
  if (pos < 0) return;
  if (static_cast<std::size_t>(pos) + 1 < route.size()) {
    add_path(Path(route.begin() + pos, route.end()));
  }
  if (pos > 0) {
    Path back(route.rend() - pos - 1, route.rend());
    add_path(std::move(back));
  }
}

// --- data ---

bool DsrAgent::has_buffered_for(NodeId dest) const {
  return std::any_of(buffer_.begin(), buffer_.end(),
                     [&](const Buffered& b) { return b.packet.dest == dest; });
}

void DsrAgent::on_data_origin(DataPacket pkt, SimTime now, Actions& out) {
  route_or_buffer(std::move(pkt), now, out);
}

void DsrAgent::route_or_buffer(DataPacket pkt, SimTime now, Actions& out) {
  if (auto path = lookup(pkt.dest)) {
    pkt.source_route = *path;
    const NodeId next = (*path)[1];
    send(out, std::move(pkt), next);
    return;
  }
  const NodeId dest = pkt.dest;
  if (buffer_.size() >= params_.send_buffer_capacity) {
    drop(out, std::move(buffer_.front().packet), DropCause::BufferOverflow);
    buffer_.pop_front();
  }
  buffer_.push_back({std::move(pkt), now});
  schedule(out, now + kSendBufferTimeout, {kBufferTimer, 0});
  if (!pending_.count(dest)) {
    pending_[dest] = Discovery{};
    send_discovery(dest, now, out);
  }
}

void DsrAgent::on_data(DataPacket pkt, NodeId /*from*/, SimTime now, Actions& out) {
  learn(pkt.source_route);
  if (pkt.dest == self_) {
    deliver(out, std::move(pkt));
    flush(now, out);
    return;
  }
  const auto pos = index_of(pkt.source_route, self_);
  if (pos < 0 || static_cast<std::size_t>(pos) + 1 >= pkt.source_route.size()) {
    drop(out, std::move(pkt), DropCause::NoRoute);
    return;
  }
  const NodeId next = pkt.source_route[pos + 1];
  send(out, std::move(pkt), next);
  flush(now, out);
}

void DsrAgent::flush(SimTime now, Actions& out) {
  if (buffer_.empty()) return;
  std::deque<Buffered> keep;
  std::vector<DataPacket> ready;
  for (auto& b : buffer_) {
    if (auto path = lookup(b.packet.dest)) {
      b.packet.source_route = *path;
      ready.push_back(std::move(b.packet));
    } else {
      keep.push_back(std::move(b));
    }
  }
  buffer_ = std::move(keep);
  for (auto& p : ready) {
    pending_.erase(p.dest);
    const NodeId next = p.source_route[1];
    send(out, std::move(p), next);
  }

  // Held replies whose origin is now reachable.
  for (auto it = held_replies_.begin(); it != held_replies_.end();) {
    auto path = lookup(it->first);
    if (!path) {
      ++it;
      continue;
    }
    for (Path& route : it->second) {
      send(out, ControlPacket{ctl::DsrRrep{std::move(route), *path}}, (*path)[1]);
    }
    it = held_replies_.erase(it);
  }
  (void)now;
}

// --- discovery ---

void DsrAgent::send_discovery(NodeId dest, SimTime now, Actions& out) {
  Discovery& d = pending_.at(dest);
  d.generation = ++generation_;
  ctl::DsrRreq rreq{self_, dest, ++rreq_id_, {self_}};
  seen_.insert({self_, rreq.id});
  send(out, ControlPacket{std::move(rreq)}, kBroadcast);
  schedule(out, now + d.timeout, {kDiscoveryTimer, pack(dest, d.generation)});
}

void DsrAgent::on_control(const ControlPacket& pkt, NodeId /*from*/, SimTime now,
                          Actions& out) {
  if (const auto* rreq = std::get_if<ctl::DsrRreq>(&pkt)) {
    handle(*rreq, now, out);
  } else if (const auto* rrep = std::get_if<ctl::DsrRrep>(&pkt)) {
    handle_reply(pkt, rrep->route, rrep->reply_path, now, out);
  } else if (const auto* grat = std::get_if<ctl::GratRrep>(&pkt)) {
    handle_reply(pkt, grat->route, grat->reply_path, now, out);
  } else if (const auto* rerr = std::get_if<ctl::DsrRerr>(&pkt)) {
    handle(*rerr, out);
  }
}

void DsrAgent::handle(const ctl::DsrRreq& rreq, SimTime now, Actions& out) {
  if (rreq.origin == self_) return;
  if (!seen_.insert({rreq.origin, rreq.id}).second) return;
  if (index_of(rreq.route, self_) >= 0) return;

  Path full = rreq.route;
  full.push_back(self_);
  learn(full);

  if (rreq.dest == self_) {
    if (params_.enable_route_reversal) {
      Path back(full.rbegin(), full.rend());
      const NodeId next = back[1];
      send(out, ControlPacket{ctl::DsrRrep{std::move(full), std::move(back)}}, next);
      return;
    }
    if (auto path = lookup(rreq.origin)) {
      send(out, ControlPacket{ctl::DsrRrep{std::move(full), *path}}, (*path)[1]);
      return;
    }
    held_replies_[rreq.origin].push_back(std::move(full));
    if (!pending_.count(rreq.origin)) {
      pending_[rreq.origin] = Discovery{};
      send_discovery(rreq.origin, now, out);
    }
    return;
  }

  if (params_.enable_grat_rrep) {
    const std::set<NodeId> avoid(rreq.route.begin(), rreq.route.end());
    if (auto cached = lookup(rreq.dest, avoid)) {
      Path route = full;
      route.insert(route.end(), cached->begin() + 1, cached->end());
      Path back(full.rbegin(), full.rend());
      const NodeId next = back[1];
      send(out, ControlPacket{ctl::GratRrep{std::move(route), std::move(back)}}, next);
      return;
    }
  }

  ctl::DsrRreq relay = rreq;
  relay.route = std::move(full);
  send(out, ControlPacket{std::move(relay)}, kBroadcast);
}

void DsrAgent::handle_reply(const ControlPacket& pkt, const Path& route,
                            const Path& reply_path, SimTime now, Actions& out) {
  learn(route);
  learn(reply_path);
  const auto pos = index_of(reply_path, self_);
  if (pos >= 0 && static_cast<std::size_t>(pos) + 1 < reply_path.size()) {
    send(out, pkt, reply_path[pos + 1]);
  }
  flush(now, out);
}

void DsrAgent::handle(const ctl::DsrRerr& rerr, Actions& out) {
  purge_link(rerr.from, rerr.to);
  const auto pos = index_of(rerr.return_path, self_);
  if (pos >= 0 && static_cast<std::size_t>(pos) + 1 < rerr.return_path.size()) {
    send(out, ControlPacket{rerr}, rerr.return_path[pos + 1]);
  }
}

// --- failures ---

void DsrAgent::on_link_break(NodeId neighbor, LinkBreakCause /*cause*/,
                             std::optional<Packet> failed, SimTime now, Actions& out) {
  purge_link(self_, neighbor);
  if (!failed || !failed->is_data()) return;
  salvage_or_report(std::move(failed->data()), neighbor, now, out);
}

void DsrAgent::salvage_or_report(DataPacket pkt, NodeId /*broken*/, SimTime now,
                                 Actions& out) {
  if (pkt.origin == self_) {
    route_or_buffer(std::move(pkt), now, out);
    return;
  }
  // Nodes already traversed, up to and including this one.
  Path traversed = pkt.path;
  const auto here = index_of(traversed, self_);
  if (here >= 0) traversed.resize(static_cast<std::size_t>(here) + 1);

  if (pkt.salvage_count < kMaxSalvage) {
    const std::set<NodeId> avoid(traversed.begin(), traversed.end());
    if (auto alt = lookup(pkt.dest, avoid)) {
      Path route = traversed;
      route.insert(route.end(), alt->begin() + 1, alt->end());
      pkt.source_route = std::move(route);
      ++pkt.salvage_count;
      send(out, std::move(pkt), (*alt)[1]);
      return;
    }
  }

  const auto pos = index_of(pkt.source_route, self_);
  const NodeId to = (pos >= 0 && static_cast<std::size_t>(pos) + 1 < pkt.source_route.size())
                        ? pkt.source_route[pos + 1]
                        : self_;
  Path back(traversed.rbegin(), traversed.rend());
  drop(out, std::move(pkt), DropCause::LinkBreak);
  if (back.size() >= 2) {
    const NodeId next = back[1];
    send(out, ControlPacket{ctl::DsrRerr{self_, to, std::move(back)}}, next);
  }
}

void DsrAgent::on_timer(const TimerTag& tag, SimTime now, Actions& out) {
  if (tag.kind == kBufferTimer) {
    std::deque<Buffered> keep;
    for (auto& b : buffer_) {
      if (b.enqueued + kSendBufferTimeout <= now) {
        drop(out, std::move(b.packet), DropCause::BufferTimeout);
      } else {
        keep.push_back(std::move(b));
      }
    }
    buffer_ = std::move(keep);
    return;
  }
  if (tag.kind != kDiscoveryTimer) return;
  const auto dest = static_cast<NodeId>(tag.arg & 0xffffffffULL);
  auto it = pending_.find(dest);
  if (it == pending_.end() || it->second.generation != (tag.arg >> 32)) return;
  if (!has_buffered_for(dest) && !held_replies_.count(dest)) {
    pending_.erase(it);
    return;
  }
  it->second.timeout = std::min(2.0 * it->second.timeout, kMaxDiscoveryTimeout);
  send_discovery(dest, now, out);
}

}  // namespace vanet::routing
