#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "vanet/engine.hpp"

using namespace vanet;

namespace {

// Writes a static trace with the given x positions on y = 0.
std::string static_trace(const std::string& name, const std::vector<double>& xs) {
  const auto dir = std::filesystem::temp_directory_path() / "vanet_engine_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  for (std::size_t i = 0; i < xs.size(); ++i) out << "0 " << i << ' ' << xs[i] << " 0 0 0\n";
  return path.string();
}

ScenarioConfig pair_config(const std::string& trace) {
  ScenarioConfig c;
  c.area_width = c.area_height = 1000;
  c.block_size = 500;
  c.node_count = 2;
  c.flows = {{0, 1}};
  c.cbr_packets = 10;
  c.fading = channel::Fading::None;
  c.mobility_trace = trace;
  c.duration = 10;
  c.protocol = routing::Protocol::Dsr;
  return c;
}

ScenarioConfig dense(routing::Protocol p, routing::Profile prof, std::uint64_t seed) {
  ScenarioConfig c;
  c.area_width = c.area_height = 1600;
  c.node_count = 30;
  c.cbr_flows = 8;
  c.duration = 30;
  c.protocol = p;
  c.profile = prof;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("two static nodes: one discovery exchange, everything delivered") {
    auto c = pair_config(static_trace("near.txt", {0, 200}));
    const auto r = simulate(c);
    CHECK(r.metrics.data_sent == 10);
    CHECK(pdr(r.metrics) == 100.0);
    CHECK(r.metrics.control_transmissions == 2);
    CHECK(r.metrics.control_by_kind.at("DSR_RREQ") == 1);
    CHECK(r.metrics.control_by_kind.at("DSR_RREP") == 1);
    CHECK(nro(r.metrics) == doctest::Approx(0.2));
    // one hop of 1000 bytes at 6 Mbit/s plus 1 ms
    CHECK(r.metrics.delay_sum / 10 >= 8000.0 / 6e6 + 0.001 - 1e-12);
  }

  TEST_CASE("two nodes out of range deliver nothing") {
    for (auto p : {routing::Protocol::Aodv, routing::Protocol::Dsr, routing::Protocol::Fsr}) {
      auto c = pair_config(static_trace("far.txt", {0, 500}));
      c.protocol = p;
      const auto r = simulate(c);
      CHECK(r.metrics.data_sent == 10);
      CHECK(pdr(r.metrics) == 0.0);
      CHECK(r.metrics.conserved());
    }
  }

  TEST_CASE("determinism per seed") {
    auto c = dense(routing::Protocol::Aodv, routing::Profile::Default, 1);
    std::ostringstream log1, log2, log3;
    const auto a = simulate(c, &log1);
    const auto b = simulate(c, &log2);
    CHECK(csv_row(label_for(c), a.metrics) == csv_row(label_for(c), b.metrics));
    CHECK(log1.str() == log2.str());
    CHECK_FALSE(log1.str().empty());
    c.seed = 2;
    simulate(c, &log3);
    CHECK(log1.str() != log3.str());
  }

  TEST_CASE("conservation holds for every protocol and profile") {
    for (auto p : {routing::Protocol::Aodv, routing::Protocol::Dsr, routing::Protocol::Fsr}) {
      for (auto prof : {routing::Profile::Default, routing::Profile::Modified}) {
        for (std::uint64_t seed : {1, 2}) {
          const auto r = simulate(dense(p, prof, seed));
          INFO(routing::to_string(p) << " " << routing::to_string(prof) << " seed " << seed);
          CHECK(r.metrics.conserved());
          CHECK(r.metrics.data_delivered <= r.metrics.data_sent);
          CHECK(r.metrics.delay_sum >= 0.0);
        }
      }
    }
  }

  TEST_CASE("FSR overhead does not depend on the flow count") {
    auto c = dense(routing::Protocol::Fsr, routing::Profile::Default, 3);
    c.cbr_flows = 2;
    const auto few = simulate(c);
    c.cbr_flows = 20;
    const auto many = simulate(c);
    CHECK(few.metrics.control_transmissions == many.metrics.control_transmissions);
    CHECK(few.metrics.control_transmissions > 0);
  }

  TEST_CASE("random flows are distinct ordered pairs") {
    ScenarioConfig c;
    c.node_count = 5;
    c.cbr_flows = 20;
    const auto flows = choose_flows(c);
    REQUIRE(flows.size() == 20);
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& f : flows) {
      CHECK(f.src != f.dst);
      CHECK(seen.insert({f.src, f.dst}).second);
    }
  }

  TEST_CASE("delivered packets never revisit a node") {
    Simulator sim(dense(routing::Protocol::Dsr, routing::Profile::Default, 4));
    bool loop_free = true;
    std::size_t seen = 0;
    sim.set_delivery_observer([&](const DataPacket& p, SimTime) {
      ++seen;
      std::set<NodeId> nodes(p.path.begin(), p.path.end());
      loop_free = loop_free && nodes.size() == p.path.size();
    });
    const auto r = sim.run();
    CHECK(seen == r.metrics.data_delivered);
    CHECK(loop_free);
    CHECK_THROWS(sim.run());
  }

  TEST_CASE("event cap aborts the run") {
    auto c = dense(routing::Protocol::Fsr, routing::Profile::Default, 1);
    c.max_events = 100;
    CHECK_THROWS_AS(simulate(c), SimulationError);
  }

  TEST_CASE("trace node count must match") {
    auto c = pair_config(static_trace("three.txt", {0, 100, 200}));
    CHECK_THROWS_AS(simulate(c), ConfigError);
  }
}
