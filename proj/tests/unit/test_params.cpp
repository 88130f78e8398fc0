#include <doctest.h>

#include "vanet/routing/agent.hpp"
#include "vanet/routing/params.hpp"

using namespace vanet::routing;

TEST_SUITE("params") {
  TEST_CASE("modified profiles move only their named fields") {
    const auto d = ProtocolParams::defaults(Protocol::Aodv, Profile::Default);
    const auto m = ProtocolParams::defaults(Protocol::Aodv, Profile::Modified);
    CHECK(m.aodv.net_diameter < d.aodv.net_diameter);
    CHECK(m.aodv.ttl_start > d.aodv.ttl_start);
    CHECK(m.aodv.ttl_threshold > d.aodv.ttl_threshold);
    CHECK(m.aodv.hello_interval == d.aodv.hello_interval);
    CHECK(m.aodv.ttl_increment == d.aodv.ttl_increment);
    CHECK(m.dsr.cache_capacity * 2 == d.dsr.cache_capacity);
    CHECK(m.dsr.send_buffer_capacity == d.dsr.send_buffer_capacity * 2);
    CHECK(m.fsr.inner_interval * 2 == d.fsr.inner_interval);
    CHECK(m.fsr.outer_interval * 2 == d.fsr.outer_interval);
    CHECK(m.fsr.inner_scope_hops == d.fsr.inner_scope_hops);
  }

  TEST_CASE("labels and parsing") {
    CHECK(ProtocolParams::defaults(Protocol::Dsr, Profile::Modified).label() == "MOD-DSR");
    CHECK(ProtocolParams::defaults(Protocol::Fsr, Profile::Default).label() == "FSR");
    CHECK(parse_protocol("aodv") == Protocol::Aodv);
    CHECK(parse_profile("mod") == Profile::Modified);
    CHECK_THROWS(parse_protocol("olsr"));
    CHECK_THROWS(parse_profile("fast"));
  }

  TEST_CASE("overrides") {
    auto p = ProtocolParams::defaults(Protocol::Aodv, Profile::Default);
    p.set("ttl_start", "3");
    CHECK(p.aodv.ttl_start == 3);
    p.set("enable_llr", "off");
    CHECK_FALSE(p.aodv.enable_llr);
    p.set("inner_interval", "2.5");
    CHECK(p.fsr.inner_interval == 2.5);
    CHECK_THROWS(p.set("ttl_start", "3x"));
    CHECK_THROWS(p.set("enable_llr", "maybe"));
    CHECK_THROWS(p.set("bogus", "1"));
  }

  TEST_CASE("validation") {
    auto p = ProtocolParams::defaults(Protocol::Aodv, Profile::Default);
    p.aodv.ttl_start = 40;
    CHECK_THROWS(p.validate());
    CHECK_THROWS(make_agent(0, p));
    p = ProtocolParams::defaults(Protocol::Dsr, Profile::Default);
    p.dsr.cache_capacity = 0;
    CHECK_THROWS(p.validate());
    p = ProtocolParams::defaults(Protocol::Fsr, Profile::Default);
    p.fsr.outer_interval = 0;
    CHECK_THROWS(p.validate());
  }

  TEST_CASE("drop cause names") {
    CHECK(to_string(DropCause::NoRoute) == "no_route");
    CHECK(to_string(DropCause::Loop) == "loop");
  }
}
