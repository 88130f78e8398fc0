#include <doctest.h>

#include "toy_net.hpp"
#include "vanet/routing/fsr.hpp"

using namespace vanet;
using namespace vanet::routing;

namespace {

ProtocolParams fsr_params() { return ProtocolParams::defaults(Protocol::Fsr, Profile::Default); }

}  // namespace

TEST_SUITE("fsr") {
  TEST_CASE("unknown destination is dropped without control") {
    FsrAgent a(0, fsr_params().fsr);
    DataPacket p;
    p.origin = 0;
    p.dest = 7;
    Actions out;
    a.on_data_origin(p, 1.0, out);
    REQUIRE(out.size() == 1);
    const auto& d = std::get<Drop>(out[0]);
    CHECK(d.cause == DropCause::NoRoute);
  }

  TEST_CASE("stale sequence numbers leave the table alone") {
    FsrAgent a(0, fsr_params().fsr);
    ctl::FsrLsu fresh;
    fresh.entries.push_back({5, 4, {1, 2}});
    Actions out;
    a.on_control(fresh, 1, 1.0, out);
    ctl::FsrLsu stale;
    stale.entries.push_back({5, 3, {9}});
    a.on_control(stale, 1, 2.0, out);
    CHECK(a.table().at(5).seq == 4);
    CHECK(a.table().at(5).neighbors == std::vector<NodeId>{1, 2});
    CHECK(out.empty());
  }

  TEST_CASE("routes converge on a line") {
    toy::Net net(5, fsr_params());
    net.line();
    net.start();
    net.run_until(40.0);
    auto& a = net.agent<FsrAgent>(0);
    CHECK(a.distances().at(4) == 4);
    CHECK(a.next_hop(4) == NodeId{1});
  }

  TEST_CASE("lowest id wins among equal first hops") {
    toy::Net net(4, fsr_params());
    net.link(0, 2);
    net.link(0, 1);
    net.link(1, 3);
    net.link(2, 3);
    net.start();
    net.run_until(40.0);
    CHECK(net.agent<FsrAgent>(0).next_hop(3) == NodeId{1});
  }

  TEST_CASE("one triggered update per endpoint of a break") {
    toy::Net net(4, fsr_params());
    net.line();
    net.start();
    net.run_until(32.0);
    const auto before = net.sent_by;
    net.cut(1, 2);
    // next periodic update is at 35 s
    net.run_until(34.0);
    for (NodeId n = 0; n < 4; ++n) {
      const auto key = std::pair<NodeId, std::string>{n, "FSR_LSU"};
      const std::size_t was = before.count(key) ? before.at(key) : 0;
      const std::size_t expect = (n == 1 || n == 2) ? 1 : 0;
      CHECK(net.sent_by[key] - was == expect);
    }
    CHECK_FALSE(net.agent<FsrAgent>(1).next_hop(2).has_value());
  }

  TEST_CASE("inner updates are at least as frequent as outer ones") {
    toy::Net net(3, fsr_params());
    net.line();
    net.start();
    for (double end = 7.0; end <= 100.0; end += 7.0) {
      net.run_until(end);
      CHECK(net.inner_lsus >= net.outer_lsus);
    }
    net.run_until(100.0);
    // 3 nodes for 100 s: inner every 5 s and outer every 15 s, both from t = 0
    CHECK(net.inner_lsus == 3 * 20);
    CHECK(net.outer_lsus == 3 * 7);
  }

  TEST_CASE("static line delivers everything") {
    toy::Net net(5, fsr_params());
    net.line();
    net.start();
    for (int k = 0; k < 20; ++k) net.send_data(0, 4, 20.0 + 0.25 * k);
    net.run_until(30.0);
    CHECK(net.delivered.size() == 20);
  }

  TEST_CASE("timer names") {
    FsrAgent a(0, fsr_params().fsr);
    CHECK(a.timer_name({1, 0}) == "LSU_INNER");
    CHECK(a.timer_name({2, 0}) == "LSU_OUTER");
  }
}
