#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "vanet/config.hpp"

using namespace vanet;

TEST_SUITE("config") {
  TEST_CASE("defaults are valid and match the standard scenario") {
    ScenarioConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.area_width == 4000.0);
    CHECK(c.block_size == 400.0);
    CHECK(c.speed_kph == 40.0);
    CHECK(c.range == 300.0);
    CHECK(c.packet_size == 1000);
    CHECK(c.grid_spec().speed == doctest::Approx(40.0 / 3.6));
  }

  TEST_CASE("parse keys, comments and overrides") {
    auto c = ScenarioConfig::parse_string(
        "# comment\n"
        "area = 2000x1200\n"
        "block_size = 400\n"
        "node_count = 30\n"
        "flow = 3>7\n"
        "flow = 7>3\n"
        "protocol = fsr\n"
        "profile = modified\n"
        "params.inner_interval = 1.5\n"
        "channel.fading = none\n"
        "channel.range_m = 250\n"
        "seed = 42\n");
    CHECK(c.area_width == 2000.0);
    CHECK(c.area_height == 1200.0);
    CHECK(c.node_count == 30);
    REQUIRE(c.flows.size() == 2);
    CHECK(c.flows[0] == Flow{3, 7});
    CHECK(c.protocol == routing::Protocol::Fsr);
    CHECK(c.protocol_params().fsr.inner_interval == 1.5);
    CHECK(c.protocol_params().fsr.outer_interval == 7.5);
    CHECK(c.range == 250.0);
    CHECK(c.channel_model().fading == channel::Fading::None);
    CHECK(c.seed == 42);
  }

  TEST_CASE("bad input is rejected") {
    CHECK_THROWS_AS(ScenarioConfig::parse_string("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse_string("node_count = -3\n"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse_string("area = 1000\n"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse_string("speed = fast\n"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse_string("just words\n"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse_string("params.nope = 1\n"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::load("/nonexistent/x.conf"), ConfigError);
  }

  TEST_CASE("validation") {
    ScenarioConfig c;
    c.node_count = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.node_count = 3;
    c.cbr_flows = 7;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.flows = {{1, 1}};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.block_size = 5000;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.set("params.ttl_start", "50");
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("serialize round trip") {
    ScenarioConfig c;
    c.set("flow", "1>2");
    c.set("cbr_rate", "3.3");
    c.set("protocol", "dsr");
    c.set("params.cache_capacity", "16");
    c.set("channel.threshold", "1e-7");
    const auto text = c.serialize();
    const auto back = ScenarioConfig::parse_string(text);
    CHECK(back.serialize() == text);
    CHECK(back.cbr_rate == 3.3);
    CHECK(back.protocol_params().dsr.cache_capacity == 16);
    CHECK(*back.threshold == 1e-7);
  }

  TEST_CASE("threshold is calibrated unless set") {
    ScenarioConfig c;
    const auto ch = c.channel_model();
    CHECK(ch.threshold > 0.0);
    c.set("channel.threshold", "0.5");
    CHECK(c.channel_model().threshold == 0.5);
  }

  TEST_CASE("relative trace paths follow the config file") {
    const auto dir = std::filesystem::temp_directory_path() / "vanet_config_test";
    std::filesystem::create_directories(dir);
    {
      std::ofstream out(dir / "s.conf");
      out << "mobility_trace = t.txt\n";
    }
    const auto c = ScenarioConfig::load((dir / "s.conf").string());
    CHECK(std::filesystem::path(c.mobility_trace) == dir / "t.txt");
    std::filesystem::remove_all(dir);
  }
}
