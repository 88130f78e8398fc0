#include "vanet/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>
#include <variant>

#include "vanet/event_queue.hpp"

namespace vanet {
namespace {

using routing::Actions;
using routing::DropCause;
using routing::LinkBreakCause;

struct Arrival {
  Packet packet;
  NodeId from;
  NodeId to;
};
struct Timer {
  NodeId node;
  routing::TimerTag tag;
};
struct MobilitySample {
  std::uint64_t index;
};
struct TrafficOrigin {
  std::size_t flow;
  std::uint64_t index;
};
struct SimEnd {};

using Payload = std::variant<Arrival, Timer, MobilitySample, TrafficOrigin, SimEnd>;

std::string node_str(NodeId n) { return n == kBroadcast ? "*" : std::to_string(n); }

}  // namespace

std::vector<Flow> choose_flows(const ScenarioConfig& cfg) {
  if (!cfg.flows.empty()) return cfg.flows;
  RandomStream rng(cfg.seed, StreamId::Traffic);
  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<Flow> flows;
  const std::size_t n = cfg.node_count;
  while (flows.size() < cfg.cbr_flows) {
    const auto s = static_cast<NodeId>(rng.index(n));
    auto d = static_cast<NodeId>(rng.index(n - 1));
    if (d >= s) ++d;
    if (used.insert({s, d}).second) flows.push_back({s, d});
  }
  return flows;
}

RunLabel label_for(const ScenarioConfig& cfg) {
  RunLabel l;
  l.protocol = routing::to_string(cfg.protocol);
  l.profile = routing::to_string(cfg.profile);
  l.nodes = cfg.node_count;
  l.flows = cfg.flows.empty() ? cfg.cbr_flows : cfg.flows.size();
  l.seed = cfg.seed;
  return l;
}

struct Simulator::Impl {
  ScenarioConfig cfg;
  channel::ChannelModel channel;
  mobility::RoadGrid grid;
  mobility::MobilityTrace trace;
  bool use_trace = false;
  std::vector<mobility::VehicleState> states;
  std::vector<std::vector<char>> linked;
  std::vector<std::unique_ptr<routing::RoutingAgent>> agents;
  std::vector<SimTime> busy_until;
  std::vector<Flow> flows;
  EventQueue<Payload> queue;
  RandomStream mobility_rng;
  RandomStream channel_rng;
  MetricsRecord metrics;
  std::ostream* log = nullptr;
  DeliveryObserver observer;
  std::string detail;
  std::uint64_t next_uid = 0;
  bool ran = false;

  explicit Impl(ScenarioConfig c)
      : cfg(std::move(c)),
        mobility_rng(cfg.seed, StreamId::Mobility),
        channel_rng(cfg.seed, StreamId::Channel) {
    cfg.validate();
    channel = cfg.channel_model();
    if (!cfg.mobility_trace.empty()) {
      try {
        trace = mobility::MobilityTrace::load(cfg.mobility_trace);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("mobility_trace: ") + e.what());
      }
      if (trace.node_count() != cfg.node_count) {
        throw ConfigError("mobility_trace has " + std::to_string(trace.node_count()) +
                          " nodes but node_count is " + std::to_string(cfg.node_count));
      }
      use_trace = true;
      states = trace.states_at(0.0);
    } else {
      auto [g, s] = mobility::build_grid(cfg.grid_spec(), cfg.seed);
      grid = g;
      states = std::move(s);
    }
    const auto params = cfg.protocol_params();
    for (NodeId i = 0; i < cfg.node_count; ++i) agents.push_back(routing::make_agent(i, params));
    busy_until.assign(cfg.node_count, 0.0);
    flows = choose_flows(cfg);
    linked = adjacency();
  }

  std::vector<std::vector<char>> adjacency() const {
    const std::size_t n = states.size();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        adj[i][j] = adj[j][i] = mobility::distance(states[i], states[j]) <= cfg.range;
      }
    }
    return adj;
  }

  void emit(SimTime t, const char* kind, const std::string& node, const std::string& text) {
    if (!log) return;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", t);
    *log << buf << ' ' << kind << ' ' << node;
    if (!text.empty()) *log << ' ' << text;
    *log << '\n';
  }

  void transmit(NodeId node, Packet pkt, NodeId next_hop) {
    const SimTime now = queue.now();
    if (!pkt.is_data()) {
      ++metrics.control_transmissions;
      ++metrics.control_by_kind[pkt.kind_name()];
    }
    const SimTime start = std::max(now, busy_until[node]);
    const SimTime done =
        start + static_cast<double>(pkt.size_bytes()) * 8.0 / cfg.bitrate + cfg.processing_delay;
    busy_until[node] = done;
    queue.push(done, Arrival{std::move(pkt), node, next_hop});
  }

  void process(NodeId node, Actions& acts) {
    const SimTime now = queue.now();
    for (auto& a : acts) {
      if (auto* tx = std::get_if<routing::Transmit>(&a)) {
        transmit(node, std::move(tx->packet), tx->next_hop);
      } else if (auto* dl = std::get_if<routing::Deliver>(&a)) {
        ++metrics.data_delivered;
        metrics.delay_sum += now - dl->packet.created;
        detail += " delivered=" + std::to_string(dl->packet.uid);
        if (observer) observer(dl->packet, now);
      } else if (auto* dr = std::get_if<routing::Drop>(&a)) {
        ++metrics.drops_of(dr->cause);
        detail += " drop=" + std::to_string(dr->packet.uid) + ":" + routing::to_string(dr->cause);
      } else if (auto* st = std::get_if<routing::ScheduleTimer>(&a)) {
        queue.push(st->at, Timer{node, st->tag});
      }
    }
    acts.clear();
  }

  bool unicast_ok(NodeId from, NodeId to) {
    const double d = mobility::distance(states[from], states[to]);
    if (d > channel.range) return false;
    for (int i = 0; i < cfg.mac_retries; ++i) {
      if (channel::try_receive(d, channel, channel_rng)) return true;
    }
    return false;
  }

  void receive(NodeId to, Packet pkt, NodeId from, Actions& acts) {
    const SimTime now = queue.now();
    if (!pkt.is_data()) {
      agents[to]->on_control(pkt.control(), from, now, acts);
      process(to, acts);
      return;
    }
    DataPacket data = std::move(pkt.data());
    if (std::find(data.path.begin(), data.path.end(), to) != data.path.end()) {
      ++metrics.drops_of(DropCause::Loop);
      detail += " drop=" + std::to_string(data.uid) + ":loop";
      return;
    }
    data.path.push_back(to);
    if (data.path.size() - 1 > cfg.max_hops) {
      ++metrics.drops_of(DropCause::TtlExpired);
      detail += " drop=" + std::to_string(data.uid) + ":ttl_expired";
      return;
    }
    agents[to]->on_data(std::move(data), from, now, acts);
    process(to, acts);
  }

  void on_arrival(Arrival ev) {
    const SimTime now = queue.now();
    Actions acts;
    detail = ev.packet.kind_name();
    if (ev.packet.is_data()) detail += " uid=" + std::to_string(ev.packet.data().uid);
    detail += " to=" + node_str(ev.to);
    if (ev.to != kBroadcast) {
      if (unicast_ok(ev.from, ev.to)) {
        detail += " ok";
        receive(ev.to, std::move(ev.packet), ev.from, acts);
      } else {
        detail += " fail";
        agents[ev.from]->on_link_break(ev.to, LinkBreakCause::MacFailure, std::move(ev.packet),
                                       now, acts);
        process(ev.from, acts);
      }
    } else {
      std::vector<NodeId> rx;
      for (NodeId j = 0; j < states.size(); ++j) {
        if (j == ev.from) continue;
        const double d = mobility::distance(states[ev.from], states[j]);
        if (d <= channel.range && channel::try_receive(d, channel, channel_rng)) rx.push_back(j);
      }
      std::string list;
      for (NodeId j : rx) list += (list.empty() ? "" : ",") + std::to_string(j);
      detail += " rx=" + (list.empty() ? std::string("-") : list);
      for (NodeId j : rx) receive(j, ev.packet, ev.from, acts);
    }
    emit(now, "packet-arrival", std::to_string(ev.from), detail);
  }

  void on_mobility(std::uint64_t k) {
    const SimTime now = queue.now();
    if (use_trace) {
      states = trace.states_at(now);
    } else {
      mobility::step(states, grid, cfg.mobility_step, mobility_rng);
    }
    auto next = adjacency();
    detail.clear();
    std::uint64_t breaks = 0;
    Actions acts;
    for (NodeId i = 0; i < states.size(); ++i) {
      for (NodeId j = i + 1; j < states.size(); ++j) {
        if (!linked[i][j] || next[i][j]) continue;
        ++breaks;
        agents[i]->on_link_break(j, LinkBreakCause::Mobility, std::nullopt, now, acts);
        process(i, acts);
        agents[j]->on_link_break(i, LinkBreakCause::Mobility, std::nullopt, now, acts);
        process(j, acts);
      }
    }
    linked = std::move(next);
    metrics.link_breaks += breaks;
    emit(now, "mobility-sample", "-", "breaks=" + std::to_string(breaks) + detail);
    const SimTime t = static_cast<double>(k + 1) * cfg.mobility_step;
    if (t < cfg.duration) queue.push(t, MobilitySample{k + 1});
  }

  SimTime flow_time(std::size_t f, std::uint64_t k) const {
    const double offset =
        static_cast<double>(f) / (cfg.cbr_rate * static_cast<double>(flows.size()));
    return cfg.cbr_start + offset + static_cast<double>(k) / cfg.cbr_rate;
  }

  void schedule_origin(std::size_t f, std::uint64_t k) {
    if (cfg.cbr_packets != 0 && k >= cfg.cbr_packets) return;
    const SimTime t = flow_time(f, k);
    if (t < cfg.duration) queue.push(t, TrafficOrigin{f, k});
  }

  void on_origin(const TrafficOrigin& ev) {
    const SimTime now = queue.now();
    const Flow& flow = flows[ev.flow];
    DataPacket pkt;
    pkt.uid = next_uid++;
    pkt.origin = flow.src;
    pkt.dest = flow.dst;
    pkt.created = now;
    pkt.size = cfg.packet_size;
    pkt.path = {flow.src};
    ++metrics.data_sent;
    detail.clear();
    const std::string head = "flow=" + std::to_string(ev.flow) + " dst=" +
                             std::to_string(flow.dst) + " uid=" + std::to_string(pkt.uid);
    Actions acts;
    agents[flow.src]->on_data_origin(std::move(pkt), now, acts);
    process(flow.src, acts);
    emit(now, "traffic-origin", std::to_string(flow.src), head + detail);
    schedule_origin(ev.flow, ev.index + 1);
  }

  void on_timer(const Timer& ev) {
    const SimTime now = queue.now();
    detail.clear();
    const std::string name = agents[ev.node]->timer_name(ev.tag);
    Actions acts;
    agents[ev.node]->on_timer(ev.tag, now, acts);
    process(ev.node, acts);
    emit(now, "timer", std::to_string(ev.node), name + detail);
  }

  std::uint64_t count_in_flight() const {
    std::uint64_t n = 0;
    queue.for_each([&](const auto& e) {
      if (const auto* a = std::get_if<Arrival>(&e.payload); a && a->packet.is_data()) ++n;
    });
    for (const auto& agent : agents) n += agent->buffered_data();
    return n;
  }

  RunResult run() {
    if (ran) throw std::logic_error("Simulator::run may only be called once");
    ran = true;
    queue.push(cfg.duration, SimEnd{});
    Actions acts;
    for (NodeId i = 0; i < agents.size(); ++i) {
      agents[i]->start(0.0, acts);
      process(i, acts);
    }
    if (cfg.mobility_step < cfg.duration) queue.push(cfg.mobility_step, MobilitySample{1});
    for (std::size_t f = 0; f < flows.size(); ++f) schedule_origin(f, 0);

    try {
      while (!queue.empty()) {
        auto ev = queue.pop();
        if (++metrics.events > cfg.max_events) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "event storm: more than %llu events by t=%.6f; raise max_events or "
                        "check the scenario",
                        static_cast<unsigned long long>(cfg.max_events), ev.time);
          throw SimulationError(buf);
        }
        if (std::holds_alternative<SimEnd>(ev.payload)) {
          emit(ev.time, "sim-end", "-", "");
          break;
        }
        std::visit(
            [&](auto& p) {
              using T = std::decay_t<decltype(p)>;
              if constexpr (std::is_same_v<T, Arrival>) {
                on_arrival(std::move(p));
              } else if constexpr (std::is_same_v<T, Timer>) {
                on_timer(p);
              } else if constexpr (std::is_same_v<T, MobilitySample>) {
                on_mobility(p.index);
              } else if constexpr (std::is_same_v<T, TrafficOrigin>) {
                on_origin(p);
              }
            },
            ev.payload);
      }
    } catch (const CausalityError& e) {
      throw SimulationError(std::string("causality violation: ") + e.what());
    }
    metrics.in_flight_at_end = count_in_flight();
    return RunResult{metrics, flows};
  }
};

Simulator::Simulator(ScenarioConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
Simulator::~Simulator() = default;

void Simulator::set_event_log(std::ostream* log) { impl_->log = log; }
void Simulator::set_delivery_observer(DeliveryObserver obs) { impl_->observer = std::move(obs); }
RunResult Simulator::run() { return impl_->run(); }

RunResult simulate(const ScenarioConfig& cfg, std::ostream* log) {
  Simulator sim(cfg);
  sim.set_event_log(log);
  return sim.run();
}

}  // namespace vanet
