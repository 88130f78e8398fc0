#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vanet/channel.hpp"

using namespace vanet;
using namespace vanet::channel;

TEST_SUITE("channel") {
  TEST_CASE("unit disk without fading") {
    auto ch = make_channel(300, Fading::None);
    CHECK(reception_probability(100, ch) == 1.0);
    CHECK(reception_probability(300, ch) == 1.0);
    CHECK(reception_probability(301, ch) == 0.0);
    CHECK_THROWS_AS(reception_probability(-1, ch), std::domain_error);
  }

  TEST_CASE("nakagami tail") {
    CHECK(nakagami_success(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    // m = 2: e^{-2x}(1 + 2x)
    CHECK(nakagami_success(2.0, 0.5) == doctest::Approx(std::exp(-1.0) * 2.0).epsilon(1e-12));
    // non-integer shape goes through the incomplete gamma; it must sit between neighbours
    const double lo = nakagami_success(1.0, 0.3);
    const double hi = nakagami_success(2.0, 0.3);
    const double mid = nakagami_success(1.5, 0.3);
    CHECK(mid > lo);
    CHECK(mid < hi);
  }

  TEST_CASE("default model is calibrated to 0.1 at the edge") {
    auto ch = make_channel(300, Fading::Nakagami);
    CHECK(reception_probability(300, ch) == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(reception_probability(301, ch) == 0.0);
    CHECK(reception_probability(80, ch) == doctest::Approx(0.9863).epsilon(1e-3));
    CHECK(reception_probability(200, ch) == doctest::Approx(0.3809).epsilon(1e-3));
  }

  TEST_CASE("reception probability decreases with distance") {
    auto ch = make_channel(300, Fading::Nakagami);
    double prev = 1.0;
    for (double d = 1.0; d <= 300.0; d += 0.5) {
      const double p = reception_probability(d, ch);
      CHECK(p <= prev + 1e-12);
      prev = p;
    }
  }

  TEST_CASE("large shape approaches the unit disk") {
    ChannelModel ch = make_channel(300, Fading::Nakagami);
    ch.m_schedule = {{std::numeric_limits<double>::infinity(), 50.0}};
    ch.threshold = ch.mean_power(300) * 0.999;
    for (double d : {10.0, 100.0, 200.0, 250.0}) {
      CHECK(std::fabs(reception_probability(d, ch) - 1.0) < 0.05);
    }
  }

  TEST_CASE("try_receive extremes") {
    RandomStream rng(5, StreamId::Channel);
    auto none = make_channel(300, Fading::None);
    for (int i = 0; i < 100; ++i) {
      CHECK(try_receive(10, none, rng));
      CHECK_FALSE(try_receive(400, none, rng));
    }
  }

  TEST_CASE("empirical reception rate") {
    RandomStream rng(9, StreamId::Channel);
    auto ch = make_channel(300, Fading::Nakagami);
    int ok = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ok += try_receive(200, ch, rng) ? 1 : 0;
    const double p = reception_probability(200, ch);
    CHECK(std::fabs(ok / double(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
  }

  TEST_CASE("parsing") {
    CHECK(parse_fading("none") == Fading::None);
    CHECK(parse_fading("nakagami") == Fading::Nakagami);
    CHECK_THROWS(parse_fading("rayleigh"));
    auto s = parse_schedule("80:3,200:1.5,inf:1");
    REQUIRE(s.size() == 3);
    CHECK(s[1].m == 1.5);
    CHECK(std::isinf(s[2].max_distance));
    CHECK(parse_schedule(format_schedule(s)).size() == 3);
    CHECK_THROWS(parse_schedule("80"));
    ChannelModel bad = make_channel(300, Fading::Nakagami);
    bad.m_schedule = {{200, 1}, {100, 2}};
    CHECK_THROWS(bad.validate());
  }
}
