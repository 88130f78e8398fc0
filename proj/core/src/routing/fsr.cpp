#include "vanet/routing/fsr.hpp"

#include <algorithm>

namespace vanet::routing {
namespace {

// Neighbours are learned from received LSUs, which arrive at least every
// inner_interval; 2.5 intervals tolerates one lost update.
constexpr double kNeighborTimeoutIntervals = 2.5;
constexpr double kEntryTimeoutIntervals = 3.0;

}  // namespace

FsrAgent::FsrAgent(NodeId self, FsrParams params) : RoutingAgent(self), params_(params) {
  table_[self_] = Entry{1, {}, 0.0};
}

void FsrAgent::start(SimTime now, Actions& out) {
  schedule(out, now, {kInnerTimer, 0});
  schedule(out, now, {kOuterTimer, 0});
}

std::string FsrAgent::timer_name(const TimerTag& tag) const {
  switch (tag.kind) {
    case kInnerTimer: return "LSU_INNER";
    case kOuterTimer: return "LSU_OUTER";
    default: return "UNKNOWN";
  }
}

const FsrAgent::Routes& FsrAgent::routes() const {
  if (routes_) return *routes_;
  Routes r;
  r.dist[self_] = 0;
  std::vector<NodeId> frontier{self_};
  for (std::uint32_t level = 0; !frontier.empty(); ++level) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      auto it = table_.find(u);
      if (it == table_.end()) continue;
      for (NodeId v : it->second.neighbors) {
        const NodeId fh = level == 0 ? v : r.first_hop.at(u);
        auto d = r.dist.find(v);
        if (d == r.dist.end()) {
          r.dist[v] = level + 1;
          r.first_hop[v] = fh;
          next.push_back(v);
        } else if (d->second == level + 1) {
          r.first_hop[v] = std::min(r.first_hop[v], fh);
        }
      }
    }
    frontier = std::move(next);
  }
  routes_ = std::move(r);
  return *routes_;
}

std::map<NodeId, std::uint32_t> FsrAgent::distances() const { return routes().dist; }

std::optional<NodeId> FsrAgent::next_hop(NodeId dest) const {
  const auto& r = routes();
  auto it = r.first_hop.find(dest);
  if (it == r.first_hop.end()) return std::nullopt;
  return it->second;
}

ctl::LsuEntry FsrAgent::entry_of(NodeId origin) const {
  const Entry& e = table_.at(origin);
  return ctl::LsuEntry{origin, e.seq, e.neighbors};
}

void FsrAgent::set_neighbors(std::vector<NodeId> nbrs, SimTime now) {
  Entry& own = table_.at(self_);
  if (nbrs == own.neighbors) return;
  own.neighbors = std::move(nbrs);
  ++own.seq;
  own.updated = now;
  routes_.reset();
}

void FsrAgent::expire(SimTime now) {
  std::vector<NodeId> nbrs;
  for (auto it = heard_.begin(); it != heard_.end();) {
    if (it->second + kNeighborTimeoutIntervals * params_.inner_interval < now) {
      it = heard_.erase(it);
    } else {
      nbrs.push_back(it->first);
      ++it;
    }
  }
  set_neighbors(std::move(nbrs), now);
  const double max_age = kEntryTimeoutIntervals * params_.outer_interval;
  const auto before = table_.size();
  std::erase_if(table_, [&](const auto& kv) {
    return kv.first != self_ && kv.second.updated + max_age < now;
  });
  if (table_.size() != before) routes_.reset();
}

void FsrAgent::on_timer(const TimerTag& tag, SimTime now, Actions& out) {
  ctl::FsrLsu lsu;
  if (tag.kind == kInnerTimer) {
    expire(now);
    lsu.scope = ctl::Scope::Inner;
    const auto scope = static_cast<std::uint32_t>(params_.inner_scope_hops);
    for (const auto& [node, d] : routes().dist) {
      if (d <= scope && table_.count(node)) lsu.entries.push_back(entry_of(node));
    }
    schedule(out, now + params_.inner_interval, {kInnerTimer, 0});
  } else if (tag.kind == kOuterTimer) {
    lsu.scope = ctl::Scope::Outer;
    for (const auto& [node, e] : table_) lsu.entries.push_back(entry_of(node));
    schedule(out, now + params_.outer_interval, {kOuterTimer, 0});
  } else {
    return;
  }
  send(out, ControlPacket{std::move(lsu)}, kBroadcast);
}

void FsrAgent::on_control(const ControlPacket& pkt, NodeId from, SimTime now,
                          Actions& /*out*/) {
  const auto* lsu = std::get_if<ctl::FsrLsu>(&pkt);
  if (!lsu) return;
  const bool fresh_neighbor = !heard_.count(from);
  heard_[from] = now;
  if (fresh_neighbor) {
    std::vector<NodeId> nbrs;
    for (const auto& [n, t] : heard_) nbrs.push_back(n);
    set_neighbors(std::move(nbrs), now);
  }
  for (const auto& e : lsu->entries) {
    if (e.origin == self_) continue;
    auto it = table_.find(e.origin);
    if (it == table_.end() || e.seq > it->second.seq) {
      std::vector<NodeId> sorted = e.neighbors;
      std::sort(sorted.begin(), sorted.end());
      table_[e.origin] = Entry{e.seq, std::move(sorted), now};
      routes_.reset();
    } else if (e.seq == it->second.seq) {
      it->second.updated = now;
    }
  }
}

void FsrAgent::route(DataPacket pkt, DropCause miss, Actions& out) {
  if (auto nh = next_hop(pkt.dest)) {
    send(out, std::move(pkt), *nh);
  } else {
    drop(out, std::move(pkt), miss);
  }
}

void FsrAgent::on_data_origin(DataPacket pkt, SimTime /*now*/, Actions& out) {
  route(std::move(pkt), DropCause::NoRoute, out);
}

void FsrAgent::on_data(DataPacket pkt, NodeId /*from*/, SimTime /*now*/, Actions& out) {
  if (pkt.dest == self_) {
    deliver(out, std::move(pkt));
    return;
  }
  route(std::move(pkt), DropCause::NoRoute, out);
}

void FsrAgent::on_link_break(NodeId neighbor, LinkBreakCause cause,
                             std::optional<Packet> failed, SimTime now, Actions& out) {
  heard_.erase(neighbor);
  std::vector<NodeId> nbrs;
  for (const auto& [n, t] : heard_) nbrs.push_back(n);
  set_neighbors(std::move(nbrs), now);
  if (cause == LinkBreakCause::Mobility) {
    ctl::FsrLsu lsu;
    lsu.scope = ctl::Scope::Inner;
    lsu.entries.push_back(entry_of(self_));
    send(out, ControlPacket{std::move(lsu)}, kBroadcast);
  }
  if (failed && failed->is_data()) route(std::move(failed->data()), DropCause::LinkBreak, out);
}

}  // namespace vanet::routing
