#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vanet/mobility.hpp"

using namespace vanet;
using namespace vanet::mobility;
using analytics::EncounterCase;

TEST_SUITE("mobility") {
  TEST_CASE("headings") {
    CHECK(heading_degrees(Heading::South) == 270.0);
    CHECK(heading_from_degrees(90.0) == Heading::North);
    CHECK(heading_from_degrees(-90.0) == Heading::South);
    CHECK(reverse(Heading::East) == Heading::West);
    CHECK(is_horizontal(Heading::West));
  }

  TEST_CASE("grid validation") {
    RoadGrid g;
    CHECK(g.columns() == 11);
    CHECK(g.rows() == 11);
    CHECK(g.distance_to_road(410, 130) == doctest::Approx(10.0));
    RoadGrid bad{1000, 1000, 300};
    CHECK_THROWS(bad.validate());
  }

  TEST_CASE("table placement: 20 nodes at 40 km/h") {
    GridSpec spec;
    auto [grid, states] = build_grid(spec, 1);
    REQUIRE(states.size() == 20);
    for (const auto& v : states) {
      CHECK(v.speed == doctest::Approx(11.111).epsilon(1e-4));
      CHECK(grid.distance_to_road(v.x, v.y) < 1e-9);
    }
  }

  TEST_CASE("single-block grid puts both nodes on its edges") {
    GridSpec spec;
    spec.grid = {400, 400, 400};
    spec.node_count = 2;
    auto [grid, states] = build_grid(spec, 7);
    for (const auto& v : states) {
      const bool on_edge = v.x == 0.0 || v.x == 400.0 || v.y == 0.0 || v.y == 400.0;
      CHECK(on_edge);
    }
  }

  TEST_CASE("placement is deterministic per seed") {
    GridSpec spec;
    auto a = build_grid(spec, 3).second;
    auto b = build_grid(spec, 3).second;
    auto c = build_grid(spec, 4).second;
    bool all_same = true;
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      all_same = all_same && a[i].x == b[i].x && a[i].y == b[i].y && a[i].heading == b[i].heading;
      any_diff = any_diff || a[i].x != c[i].x || a[i].y != c[i].y;
    }
    CHECK(all_same);
    CHECK(any_diff);
  }

  TEST_CASE("mid-block step moves exactly speed * dt") {
    RoadGrid g;
    std::vector<VehicleState> s{{0, 100.0, 400.0, Heading::East, 10.0}};
    RandomStream rng(1, StreamId::Mobility);
    step(s, g, 1.0, rng);
    CHECK(s[0].x == doctest::Approx(110.0));
    CHECK(s[0].y == 400.0);
    CHECK_THROWS(step(s, g, 0.0, rng));
  }

  TEST_CASE("vehicles stay on roads inside the area") {
    GridSpec spec;
    spec.node_count = 30;
    spec.speed = 25.0;
    auto [grid, states] = build_grid(spec, 11);
    RandomStream rng(11, StreamId::Mobility);
    for (int k = 0; k < 2000; ++k) {
      step(states, grid, 0.1, rng);
      for (const auto& v : states) {
        REQUIRE(grid.distance_to_road(v.x, v.y) < 1e-6);
        REQUIRE(v.x >= -1e-9);
        REQUIRE(v.x <= grid.width + 1e-9);
        REQUIRE(v.y >= -1e-9);
        REQUIRE(v.y <= grid.height + 1e-9);
      }
    }
  }

  TEST_CASE("closed-form link lifetime") {
    CHECK(link_lifetime({EncounterCase::case2(2.0), 100, 300, 10}) == doctest::Approx(20.0));
    CHECK(link_lifetime({EncounterCase::case3(), 100, 300, 10}) == doctest::Approx(20.0));
    CHECK(link_lifetime({EncounterCase::case4(2.0), 100, 300, 10}) ==
          doctest::Approx(400.0 / 30.0));
    CHECK(std::isinf(link_lifetime({EncounterCase::case1(), 100, 300, 10})));
    CHECK_THROWS(link_lifetime({EncounterCase::case1(), 400, 300, 10}));
  }

  TEST_CASE("stepped encounter matches the closed form") {
    EncounterScenario s{EncounterCase::case4(1.7), 120, 300, 8};
    const double expect = link_lifetime(s);
    const double got = simulate_link_break(s, 0.01, 100.0);
    CHECK(got >= expect - 1e-9);
    CHECK(got - expect <= 0.01 + 1e-9);
    CHECK(std::isinf(simulate_link_break({EncounterCase::case1(), 50, 300, 8}, 0.1, 50.0)));
  }

  TEST_CASE("trace round trip") {
    std::ostringstream out;
    write_trace_line(out, 0.0, {0, 1.5, 0.0, Heading::East, 10.0});
    write_trace_line(out, 0.0, {1, 0.0, 2.5, Heading::North, 0.0});
    write_trace_line(out, 1.0, {0, 11.5, 0.0, Heading::East, 10.0});
    std::istringstream in("# comment\n" + out.str());
    auto trace = MobilityTrace::parse(in);
    CHECK(trace.node_count() == 2);
    auto at = trace.states_at(0.5);
    CHECK(at[0].x == doctest::Approx(1.5));
    CHECK(at[1].heading == Heading::North);
    CHECK(trace.states_at(1.0)[0].x == doctest::Approx(11.5));
    std::istringstream bad("0 0 1 2\n");
    CHECK_THROWS(MobilityTrace::parse(bad));
    CHECK_THROWS(MobilityTrace::load("/nonexistent/trace.txt"));
  }
}
